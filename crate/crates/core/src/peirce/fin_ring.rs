use super::PeirceError;
use crate::exact_linalg::{AbHom, Bilinear, Elem, FinAbGroup, Subgroup};

/// A finite associative ring, possibly without identity, with its
/// multiplication stored on pairs of additive generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinRing {
    additive: FinAbGroup,
    mult: Bilinear,
    unit: Option<Elem>,
}

impl FinRing {
    /// Checks associativity on generator triples and the unit axioms on
    /// generators.
    pub fn new(mult: Bilinear, unit: Option<Elem>) -> Result<Self, PeirceError> {
        let ring = Self::new_unchecked(mult, unit)?;
        if let Some((a, b, c)) = ring.associativity_failure() {
            return Err(PeirceError::NotAssociative {
                indices: None,
                generators: (a, b, c),
            });
        }
        if let Some(u) = &ring.unit {
            ring.additive.check(u)?;
            for g in ring.additive.generators() {
                if ring.mul(u, &g) != g || ring.mul(&g, u) != g {
                    return Err(PeirceError::NotUnital);
                }
            }
        }
        Ok(ring)
    }

    /// Skips the associativity check (used to build deliberately broken
    /// rings in negative tests).
    pub fn new_unchecked(mult: Bilinear, unit: Option<Elem>) -> Result<Self, PeirceError> {
        if mult.left() != mult.right() || mult.left() != mult.target() {
            return Err(PeirceError::Shape(
                "ring multiplication must map R x R -> R".into(),
            ));
        }
        Ok(Self {
            additive: mult.left().clone(),
            mult,
            unit,
        })
    }

    /// `Z/n`.
    pub fn cyclic(n: i64) -> Self {
        let g = FinAbGroup::cyclic(n);
        let mult = Bilinear::new(g.clone(), g.clone(), g.clone(), vec![vec![vec![1 % n]]])
            .expect("valid table");
        Self {
            additive: g.clone(),
            mult,
            unit: Some(g.reduce(&[1])),
        }
    }

    /// `Mat(k, Z/n)` with matrix units `e_{ab}` as generators in row-major
    /// order.
    pub fn matrix(k: usize, n: i64) -> Self {
        let g = FinAbGroup::free_module(n, k * k);
        let mult = Bilinear::from_fn(&g, &g, &g, |x, y| {
            let (a, b) = (x / k, x % k);
            let (c, d) = (y / k, y % k);
            let mut v = vec![0; k * k];
            if b == c {
                v[a * k + d] = 1;
            }
            v
        })
        .expect("valid table");
        let mut unit = vec![0; k * k];
        for a in 0..k {
            unit[a * k + a] = 1;
        }
        Self {
            additive: g.clone(),
            mult,
            unit: Some(g.reduce(&unit)),
        }
    }

    /// Direct product of rings; components occupy consecutive coordinates.
    pub fn product(parts: &[FinRing]) -> Self {
        let (g, offsets) = FinAbGroup::direct_sum(parts.iter().map(|r| &r.additive));
        let mut owner = Vec::new();
        for (p, r) in parts.iter().enumerate() {
            for i in 0..r.additive.rank() {
                owner.push((p, i));
            }
        }
        let mult = Bilinear::from_fn(&g, &g, &g, |x, y| {
            let (px, ix) = owner[x];
            let (py, iy) = owner[y];
            let mut v = vec![0; g.rank()];
            if px == py {
                let prod = parts[px].mult.entry(ix, iy);
                v[offsets[px]..offsets[px] + prod.len()].copy_from_slice(prod);
            }
            v
        })
        .expect("valid table");
        let unit = parts
            .iter()
            .map(|r| r.unit.clone())
            .collect::<Option<Vec<_>>>()
            .map(|us| us.concat());
        Self {
            additive: g,
            mult,
            unit,
        }
    }

    pub fn additive(&self) -> &FinAbGroup {
        &self.additive
    }

    pub fn mult(&self) -> &Bilinear {
        &self.mult
    }

    pub fn unit(&self) -> Option<&Elem> {
        self.unit.as_ref()
    }

    pub fn order(&self) -> u128 {
        self.additive.order()
    }

    pub fn zero(&self) -> Elem {
        self.additive.zero_elem()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Elem {
        self.additive.add(x, y)
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Elem {
        self.additive.sub(x, y)
    }

    pub fn neg(&self, x: &[i64]) -> Elem {
        self.additive.neg(x)
    }

    pub fn mul(&self, x: &[i64], y: &[i64]) -> Elem {
        self.mult.apply(x, y)
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        self.additive.is_zero(x)
    }

    /// `y ↦ x y`.
    pub fn left_mult(&self, x: &[i64]) -> AbHom {
        self.mult.fix_left(x)
    }

    /// `y ↦ y x`.
    pub fn right_mult(&self, x: &[i64]) -> AbHom {
        self.mult.fix_right(x)
    }

    /// First generator triple `(a, b, c)` with `(ab)c != a(bc)`.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let gens = self.additive.generators();
        for (a, x) in gens.iter().enumerate() {
            for (b, y) in gens.iter().enumerate() {
                let xy = self.mul(x, y);
                for (c, z) in gens.iter().enumerate() {
                    let lhs = self.mul(&xy, z);
                    let rhs = self.mul(x, &self.mul(y, z));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// The subgroup `R^2` spanned by products of generators.
    pub fn square(&self) -> Subgroup {
        let gens = self.additive.generators();
        let prods = gens
            .iter()
            .flat_map(|x| gens.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.mul(x, y))
            .collect();
        Subgroup::new(&self.additive, prods).expect("products lie in the ring")
    }

    /// Searches for a two-sided identity by solving the linear conditions
    /// `e g = g = g e` on generators.
    pub fn find_unit(&self) -> Option<Elem> {
        let gens = self.additive.generators();
        let left: Vec<AbHom> = gens.iter().map(|g| self.right_mult(g)).collect();
        let right: Vec<AbHom> = gens.iter().map(|g| self.left_mult(g)).collect();
        let mut maps = left;
        maps.extend(right);
        let stacked = AbHom::stack(&self.additive, &maps).ok()?;
        let rhs: Elem = gens.iter().chain(gens.iter()).flatten().copied().collect();
        let e = stacked.preimage(&rhs)?;
        Some(e)
    }

    /// Elements in lexicographic order (small rings only).
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.additive.elements()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_ring_is_associative_and_unital() {
        let r = FinRing::matrix(2, 3);
        assert!(r.associativity_failure().is_none());
        let u = r.unit().unwrap().clone();
        assert_eq!(r.find_unit(), Some(u));
        assert_eq!(r.order(), 81);
    }

    #[test]
    fn product_ring() {
        let r = FinRing::product(&[FinRing::cyclic(2), FinRing::cyclic(2)]);
        assert_eq!(r.unit(), Some(&vec![1, 1]));
        assert_eq!(r.mul(&[1, 0], &[0, 1]), vec![0, 0]);
        assert!(FinRing::new(r.mult().clone(), r.unit().cloned()).is_ok());
    }

    #[test]
    fn non_associative_table_is_rejected() {
        let g = FinAbGroup::free_module(2, 2);
        // x*x = y, everything else zero except y*x = x
        let mult = Bilinear::from_fn(&g, &g, &g, |a, b| match (a, b) {
            (0, 0) => vec![0, 1],
            (1, 0) => vec![1, 0],
            _ => vec![0, 0],
        })
        .unwrap();
        assert!(matches!(
            FinRing::new(mult, None),
            Err(PeirceError::NotAssociative { .. })
        ));
    }

    #[test]
    fn nilpotent_ring_has_no_unit() {
        let g = FinAbGroup::cyclic(4);
        let mult = Bilinear::new(g.clone(), g.clone(), g.clone(), vec![vec![vec![2]]]).unwrap();
        let r = FinRing::new(mult, None).unwrap();
        assert_eq!(r.find_unit(), None);
    }
}
