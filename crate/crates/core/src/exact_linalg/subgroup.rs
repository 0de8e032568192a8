use super::{AbHom, Elem, FinAbGroup, LinalgError, Quotient};
use num_integer::Integer;

/// A subgroup of a [`FinAbGroup`], stored with its generators and a
/// canonical Hermite basis of the preimage lattice in `Z^r`.
///
/// Row `i` of the basis vanishes before column `i`, has pivot `h_i` dividing
/// `d_i` at column `i`, and entries right of the pivot reduced modulo the
/// later pivots. Two subgroups are equal iff their bases are equal.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: FinAbGroup,
    generators: Vec<Elem>,
    rows: Vec<Elem>,
    pivots: Vec<i64>,
}

impl Subgroup {
    pub fn new(ambient: &FinAbGroup, generators: Vec<Elem>) -> Result<Self, LinalgError> {
        for g in &generators {
            if g.len() != ambient.rank() {
                return Err(LinalgError::NotAnElement {
                    elem: g.clone(),
                    orders: ambient.orders().to_vec(),
                });
            }
        }
        let generators: Vec<Elem> = generators.iter().map(|g| ambient.reduce(g)).collect();
        let (rows, pivots) = echelon(ambient, generators.iter().cloned());
        Ok(Self {
            ambient: ambient.clone(),
            generators,
            rows,
            pivots,
        })
    }

    pub(crate) fn from_reduced(ambient: &FinAbGroup, generators: Vec<Elem>) -> Self {
        debug_assert!(generators.iter().all(|g| ambient.contains(g)));
        let (rows, pivots) = echelon(ambient, generators.iter().cloned());
        Self {
            ambient: ambient.clone(),
            generators,
            rows,
            pivots,
        }
    }

    pub fn trivial(ambient: &FinAbGroup) -> Self {
        Self::from_reduced(ambient, Vec::new())
    }

    pub fn whole(ambient: &FinAbGroup) -> Self {
        Self::from_reduced(ambient, ambient.generators())
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub(crate) fn rows(&self) -> &[Elem] {
        &self.rows
    }

    pub(crate) fn pivots(&self) -> &[i64] {
        &self.pivots
    }

    /// The nontrivial rows of the canonical basis; they generate the subgroup.
    pub fn canonical_basis(&self) -> Vec<Elem> {
        let d = self.ambient.orders();
        (0..self.rows.len())
            .filter(|&i| self.pivots[i] < d[i])
            .map(|i| self.rows[i].clone())
            .collect()
    }

    pub fn order(&self) -> u128 {
        self.ambient
            .orders()
            .iter()
            .zip(&self.pivots)
            .fold(1u128, |acc, (&d, &h)| acc.saturating_mul((d / h) as u128))
    }

    pub fn is_trivial(&self) -> bool {
        self.pivots.as_slice() == self.ambient.orders()
    }

    pub fn is_whole(&self) -> bool {
        self.pivots.iter().all(|&h| h == 1)
    }

    /// Lexicographically least element of the coset `x + H` (with
    /// coordinates in their canonical ranges).
    pub fn coset_rep(&self, x: &[i64]) -> Elem {
        let d = self.ambient.orders();
        let mut v = self.ambient.reduce(x);
        for i in 0..v.len() {
            let q = Integer::div_floor(&v[i], &self.pivots[i]);
            if q != 0 {
                sub_row(&mut v, q, &self.rows[i], i, d);
            }
        }
        v
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.coset_rep(x).iter().all(|&c| c == 0)
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && other.canonical_basis().iter().all(|g| self.contains(g))
    }

    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch);
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(Self::from_reduced(&self.ambient, gens))
    }

    /// Solves `x = sum c_i * row_i` over the nontrivial canonical rows.
    pub(crate) fn basis_coefficients(&self, x: &[i64]) -> Option<Vec<i64>> {
        let d = self.ambient.orders();
        let mut v = self.ambient.reduce(x);
        let mut coeffs = Vec::new();
        for i in 0..v.len() {
            let h = self.pivots[i];
            if h == d[i] {
                if v[i] != 0 {
                    return None;
                }
                continue;
            }
            if v[i] % h != 0 {
                return None;
            }
            let q = v[i] / h;
            coeffs.push(q);
            if q != 0 {
                sub_row(&mut v, q, &self.rows[i], i, d);
            }
        }
        Some(coeffs)
    }

    pub fn quotient(&self) -> Quotient {
        Quotient::new(self)
    }

    /// Presents the subgroup as an abstract group with an inclusion map.
    pub fn presentation(&self) -> SubgroupPresentation {
        SubgroupPresentation::new(self)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.pivots == other.pivots && self.rows == other.rows
    }
}

impl Eq for Subgroup {}

/// `subgroup_equal`: canonical-basis comparison.
pub fn subgroup_equal(a: &Subgroup, b: &Subgroup) -> bool {
    a == b
}

fn sub_row(v: &mut [i64], q: i64, row: &[i64], from: usize, d: &[i64]) {
    for k in from..v.len() {
        if row[k] != 0 {
            v[k] = (v[k] - q * row[k]).rem_euclid(d[k]);
        }
    }
}

fn echelon(ambient: &FinAbGroup, gens: impl Iterator<Item = Elem>) -> (Vec<Elem>, Vec<i64>) {
    let d = ambient.orders();
    let r = d.len();
    let mut work: Vec<Elem> = gens.filter(|g| g.iter().any(|&x| x != 0)).collect();
    let mut rows = Vec::with_capacity(r);
    let mut pivots = Vec::with_capacity(r);
    for i in 0..r {
        let mut p = vec![0i64; r];
        p[i] = d[i];
        let mut rest = Vec::with_capacity(work.len());
        for v in work.drain(..) {
            if v[i] == 0 {
                rest.push(v);
                continue;
            }
            let eg = p[i].extended_gcd(&v[i]);
            let (g, a, b) = (eg.gcd, eg.x, eg.y);
            let pc = p[i] / g;
            let vc = v[i] / g;
            let mut np = vec![0i64; r];
            let mut nv = vec![0i64; r];
            np[i] = g;
            for k in i + 1..r {
                np[k] = (a * p[k] + b * v[k]).rem_euclid(d[k]);
                nv[k] = (vc * p[k] - pc * v[k]).rem_euclid(d[k]);
            }
            p = np;
            if nv.iter().any(|&x| x != 0) {
                rest.push(nv);
            }
        }
        work = rest;
        pivots.push(p[i]);
        if p[i] == d[i] {
            // trivial pivot: the row is d_i * e_i, which is zero in the group
            p = vec![0; r];
            p[i] = d[i];
        }
        rows.push(p);
    }
    // clear entries above later pivots
    for i in (0..r).rev() {
        for j in i + 1..r {
            let q = Integer::div_floor(&rows[i][j], &pivots[j]);
            if q != 0 {
                let rj = rows[j].clone();
                let row = &mut rows[i];
                row[j] -= q * rj[j];
                for k in j + 1..r {
                    row[k] = (row[k] - q * rj[k]).rem_euclid(d[k]);
                }
            }
        }
    }
    (rows, pivots)
}

/// A subgroup realized as an abstract [`FinAbGroup`] together with the
/// inclusion into its ambient group.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub group: FinAbGroup,
    pub inclusion: AbHom,
    subgroup: Subgroup,
    free: FinAbGroup,
    to_group: AbHom,
}

impl SubgroupPresentation {
    fn new(sub: &Subgroup) -> Self {
        let basis = sub.canonical_basis();
        let amb = sub.ambient();
        let orders: Vec<i64> = basis.iter().map(|b| amb.elem_order(b)).collect();
        let free = FinAbGroup::new(&orders).expect("orders are positive");
        let phi = AbHom::new(free.clone(), amb.clone(), basis).expect("orders annihilate rows");
        let quot = phi.kernel().quotient();
        let inclusion = quot
            .induced_map(&phi)
            .expect("map factors through its kernel");
        Self {
            group: quot.group().clone(),
            inclusion,
            subgroup: sub.clone(),
            free,
            to_group: quot.projection().clone(),
        }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Coordinates in [`Self::group`] of an ambient element, or `None` when
    /// the element lies outside the subgroup.
    pub fn coords(&self, x: &[i64]) -> Option<Elem> {
        let c = self.subgroup.basis_coefficients(x)?;
        let c = self.free.reduce(&c);
        Some(self.to_group.apply(&c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_span(g: &FinAbGroup, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(g.zero_elem());
        let mut frontier = vec![g.zero_elem()];
        while let Some(x) = frontier.pop() {
            for h in gens {
                let y = g.add(&x, h);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    #[test]
    fn span_matches_enumeration() {
        let g = FinAbGroup::new(&[4, 6, 2]).unwrap();
        let gens = vec![vec![2, 3, 1], vec![0, 2, 1]];
        let sub = Subgroup::new(&g, gens.clone()).unwrap();
        let brute = brute_span(&g, &gens);
        assert_eq!(sub.order(), brute.len() as u128);
        for x in g.elements() {
            assert_eq!(sub.contains(&x), brute.contains(&x), "{x:?}");
        }
    }

    #[test]
    fn coset_rep_is_lex_least() {
        let g = FinAbGroup::new(&[4, 4]).unwrap();
        let sub = Subgroup::new(&g, vec![vec![1, 2]]).unwrap();
        for x in g.elements() {
            let rep = sub.coset_rep(&x);
            let least = g
                .elements()
                .filter(|y| sub.contains(&g.sub(y, &x)))
                .min()
                .unwrap();
            assert_eq!(rep, least);
        }
    }

    #[test]
    fn canonical_basis_is_generator_independent() {
        let g = FinAbGroup::new(&[2, 2]).unwrap();
        let a = Subgroup::new(&g, vec![vec![1, 1]]).unwrap();
        let b = Subgroup::new(&g, vec![vec![1, 1], vec![0, 0], vec![1, 1]]).unwrap();
        assert!(subgroup_equal(&a, &b));
        let c = Subgroup::new(&g, vec![vec![1, 0]]).unwrap();
        assert!(!subgroup_equal(&a, &c));
    }

    #[test]
    fn presentation_roundtrip() {
        let g = FinAbGroup::new(&[4, 2]).unwrap();
        let sub = Subgroup::new(&g, vec![vec![2, 1]]).unwrap();
        let p = sub.presentation();
        assert_eq!(p.group.order(), 2);
        for x in g.elements() {
            match p.coords(&x) {
                Some(c) => {
                    assert!(sub.contains(&x));
                    assert_eq!(p.inclusion.apply(&c), x);
                }
                None => assert!(!sub.contains(&x)),
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn random_subgroups_match_enumeration(
            orders in proptest::collection::vec(2i64..=6, 1..=3),
            raw in proptest::collection::vec(0i64..36, 0..=9),
        ) {
            let g = FinAbGroup::new(&orders).unwrap();
            let r = g.rank();
            let gens: Vec<Elem> = raw.chunks(r).filter(|c| c.len() == r).map(|c| g.reduce(c)).collect();
            let sub = Subgroup::new(&g, gens.clone()).unwrap();
            let brute = brute_span(&g, &gens);
            proptest::prop_assert_eq!(sub.order(), brute.len() as u128);
            for x in &brute {
                proptest::prop_assert!(sub.contains(x));
            }
            let alt = Subgroup::new(&g, sub.canonical_basis()).unwrap();
            proptest::prop_assert!(subgroup_equal(&sub, &alt));
            let p = sub.presentation();
            proptest::prop_assert_eq!(p.group.order(), sub.order());
        }
    }
}
