use super::{Elem, LinalgError};
use num_integer::Integer;
use std::fmt;

/// A finite abelian group `Z/d_1 + ... + Z/d_r`, presented by its cyclic
/// orders. Orders equal to 1 are dropped on construction, so every stored
/// order is at least 2. Elements are coordinate vectors with entry `i` in
/// `[0, d_i)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FinAbGroup {
    orders: Vec<i64>,
}

impl FinAbGroup {
    pub fn new(orders: &[i64]) -> Result<Self, LinalgError> {
        if let Some(&d) = orders.iter().find(|&&d| d < 1) {
            return Err(LinalgError::InvalidOrder(d));
        }
        Ok(Self {
            orders: orders.iter().copied().filter(|&d| d > 1).collect(),
        })
    }

    /// The trivial group.
    pub fn zero() -> Self {
        Self { orders: Vec::new() }
    }

    /// `k` copies of `Z/n`.
    pub fn free_module(n: i64, k: usize) -> Self {
        Self::new(&vec![n; k]).expect("modulus is positive")
    }

    pub fn cyclic(n: i64) -> Self {
        Self::free_module(n, 1)
    }

    /// Number of cyclic generators.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// Group order; saturates at `u128::MAX`.
    pub fn order(&self) -> u128 {
        self.orders
            .iter()
            .fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }

    pub fn exponent(&self) -> i64 {
        self.orders.iter().fold(1, |acc, &d| acc.lcm(&d))
    }

    pub fn zero_elem(&self) -> Elem {
        vec![0; self.rank()]
    }

    pub fn generator(&self, i: usize) -> Elem {
        let mut e = self.zero_elem();
        e[i] = 1;
        e
    }

    pub fn generators(&self) -> Vec<Elem> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    /// Reduces arbitrary integer coordinates into canonical range.
    pub fn reduce(&self, raw: &[i64]) -> Elem {
        debug_assert_eq!(raw.len(), self.rank());
        raw.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| x.rem_euclid(d))
            .collect()
    }

    pub fn reduce_in_place(&self, raw: &mut [i64]) {
        for (x, &d) in raw.iter_mut().zip(&self.orders) {
            *x = x.rem_euclid(d);
        }
    }

    pub fn contains(&self, e: &[i64]) -> bool {
        e.len() == self.rank() && e.iter().zip(&self.orders).all(|(&x, &d)| (0..d).contains(&x))
    }

    pub fn check(&self, e: &[i64]) -> Result<(), LinalgError> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(LinalgError::NotAnElement {
                elem: e.to_vec(),
                orders: self.orders.clone(),
            })
        }
    }

    pub fn is_zero(&self, e: &[i64]) -> bool {
        e.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Elem {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &d)| (x + y).rem_euclid(d))
            .collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Elem {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &d)| (x - y).rem_euclid(d))
            .collect()
    }

    pub fn neg(&self, a: &[i64]) -> Elem {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| (-x).rem_euclid(d))
            .collect()
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Elem {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| ((k.rem_euclid(d)) * x).rem_euclid(d))
            .collect()
    }

    /// `acc += k * a`, reduced.
    pub fn add_scaled(&self, acc: &mut [i64], k: i64, a: &[i64]) {
        for ((x, &y), &d) in acc.iter_mut().zip(a).zip(&self.orders) {
            *x = (*x + k.rem_euclid(d) * y).rem_euclid(d);
        }
    }

    /// Additive order of an element.
    pub fn elem_order(&self, a: &[i64]) -> i64 {
        a.iter()
            .zip(&self.orders)
            .fold(1, |acc, (&x, &d)| acc.lcm(&(d / x.gcd(&d))))
    }

    /// Enumerates all elements in lexicographic order.
    pub fn elements(&self) -> Elements<'_> {
        Elements {
            orders: &self.orders,
            next: Some(self.zero_elem()),
        }
    }

    /// Position of an element in the order produced by [`Self::elements`].
    pub fn index_of(&self, a: &[i64]) -> usize {
        a.iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    /// Direct sum; the summands occupy consecutive coordinate ranges
    /// starting at the returned offsets.
    pub fn direct_sum<'a>(parts: impl IntoIterator<Item = &'a FinAbGroup>) -> (FinAbGroup, Vec<usize>) {
        let mut orders = Vec::new();
        let mut offsets = Vec::new();
        for p in parts {
            offsets.push(orders.len());
            orders.extend_from_slice(&p.orders);
        }
        (FinAbGroup { orders }, offsets)
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.orders.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub struct Elements<'a> {
    orders: &'a [i64],
    next: Option<Elem>,
}

impl Iterator for Elements<'_> {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.orders[pos] {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(cur)
    }
}
