use super::snf::smith_normal_form;
use super::{AbHom, Bilinear, Elem, FinAbGroup, LinalgError, Subgroup};
use num_bigint::BigInt;
use num_integer::Integer;

/// `G / H` with its projection and a coset-representative section.
#[derive(Clone, Debug)]
pub struct Quotient {
    group: FinAbGroup,
    proj: AbHom,
    sub: Subgroup,
    // a lift of each quotient generator
    lifts: Vec<Elem>,
}

fn big_mod(x: &BigInt, m: i64) -> i64 {
    let r = x.mod_floor(&BigInt::from(m));
    i64::try_from(&r).expect("residue fits")
}

impl Quotient {
    pub(crate) fn new(sub: &Subgroup) -> Self {
        let amb = sub.ambient();
        let d = amb.orders();
        let r = d.len();
        let smith = smith_normal_form(sub.rows());
        let mut orders = Vec::new();
        let mut kept = Vec::new();
        for t in 0..r {
            let s = i64::try_from(&smith.s[t][t]).expect("invariant factor fits in i64");
            if s > 1 {
                orders.push(s);
                kept.push(t);
            }
        }
        let group = FinAbGroup::new(&orders).expect("positive invariants");
        // x lies in the lattice iff x * V lies in the row space of S
        let images = (0..r)
            .map(|i| {
                kept.iter()
                    .zip(&orders)
                    .map(|(&t, &s)| big_mod(&smith.v[i][t], s))
                    .collect()
            })
            .collect();
        let proj = AbHom::from_parts(amb.clone(), group.clone(), images);
        let lifts = kept
            .iter()
            .map(|&t| (0..r).map(|k| big_mod(&smith.v_inv[t][k], d[k])).collect())
            .collect();
        Self {
            group,
            proj,
            sub: sub.clone(),
            lifts,
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn projection(&self) -> &AbHom {
        &self.proj
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn ambient(&self) -> &FinAbGroup {
        self.sub.ambient()
    }

    /// The lexicographically least representative of the coset `q`.
    pub fn section(&self, q: &[i64]) -> Elem {
        let amb = self.sub.ambient();
        let mut acc = amb.zero_elem();
        for (&c, lift) in q.iter().zip(&self.lifts) {
            if c != 0 {
                amb.add_scaled(&mut acc, c, lift);
            }
        }
        self.sub.coset_rep(&acc)
    }

    /// Factors `f` through the projection. Fails with a generator of the
    /// subgroup that `f` does not kill.
    pub fn induced_map(&self, f: &AbHom) -> Result<AbHom, LinalgError> {
        if f.source() != self.sub.ambient() {
            return Err(LinalgError::AmbientMismatch);
        }
        let gens: Vec<Elem> = if self.sub.generators().is_empty() {
            self.sub.canonical_basis()
        } else {
            self.sub.generators().to_vec()
        };
        for h in &gens {
            let img = f.apply(h);
            if !f.target().is_zero(&img) {
                return Err(LinalgError::NotWellDefined {
                    witness: h.clone(),
                    image: img,
                });
            }
        }
        let images = self.lifts.iter().map(|l| f.apply(l)).collect();
        Ok(AbHom::from_parts(self.group.clone(), f.target().clone(), images))
    }
}

/// `G / H`.
pub fn quotient(g: &FinAbGroup, h: &Subgroup) -> Result<Quotient, LinalgError> {
    if h.ambient() != g {
        return Err(LinalgError::AmbientMismatch);
    }
    Ok(Quotient::new(h))
}

/// The map `G/H -> T` induced by `f: G -> T`, after checking `f(H) = 0`.
pub fn induced_map(f: &AbHom, h: &Subgroup) -> Result<(Quotient, AbHom), LinalgError> {
    let q = quotient(f.source(), h)?;
    let g = q.induced_map(f)?;
    Ok((q, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_mod_two() {
        let g = FinAbGroup::cyclic(4);
        let h = Subgroup::new(&g, vec![vec![2]]).unwrap();
        let q = quotient(&g, &h).unwrap();
        assert_eq!(q.group().orders(), &[2]);
        assert_eq!(q.projection().kernel(), h);
    }

    #[test]
    fn trivial_subgroup_gives_isomorphic_quotient() {
        let g = FinAbGroup::new(&[2, 4, 3]).unwrap();
        let q = quotient(&g, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(q.group().order(), g.order());
        assert!(q.projection().is_isomorphism());
    }

    #[test]
    fn diagonal_of_klein_four() {
        let g = FinAbGroup::new(&[2, 2]).unwrap();
        let h = Subgroup::new(&g, vec![vec![1, 1]]).unwrap();
        let q = quotient(&g, &h).unwrap();
        assert_eq!(q.group().orders(), &[2]);
        // coset enumeration: two cosets of size two
        let mut classes = std::collections::BTreeMap::new();
        for x in g.elements() {
            classes.entry(q.projection().apply(&x)).or_insert_with(Vec::new).push(x);
        }
        assert_eq!(classes.len(), 2);
        assert!(classes.values().all(|c| c.len() == 2));
    }

    #[test]
    fn induced_map_detects_ill_defined_maps() {
        let g = FinAbGroup::cyclic(4);
        let h = Subgroup::new(&g, vec![vec![2]]).unwrap();
        let err = induced_map(&AbHom::identity(&g), &h).unwrap_err();
        assert_eq!(
            err,
            LinalgError::NotWellDefined {
                witness: vec![2],
                image: vec![2]
            }
        );
        let m2 = AbHom::new(g.clone(), FinAbGroup::cyclic(2), vec![vec![1]]).unwrap();
        let (_, ind) = induced_map(&m2, &h).unwrap();
        assert!(ind.is_isomorphism());
        let zero = AbHom::zero(&g, &FinAbGroup::cyclic(3));
        let (_, ind) = induced_map(&zero, &h).unwrap();
        assert!(ind.is_zero());
    }

    proptest::proptest! {
        #[test]
        fn section_and_counting(
            orders in proptest::collection::vec(2i64..=6, 1..=3),
            raw in proptest::collection::vec(0i64..36, 0..=6),
        ) {
            let g = FinAbGroup::new(&orders).unwrap();
            let r = g.rank();
            let gens: Vec<Elem> = raw.chunks(r).filter(|c| c.len() == r).map(|c| g.reduce(c)).collect();
            let h = Subgroup::new(&g, gens).unwrap();
            let q = quotient(&g, &h).unwrap();
            proptest::prop_assert_eq!(g.order(), h.order() * q.group().order());
            proptest::prop_assert_eq!(q.projection().kernel(), h.clone());
            for y in q.group().elements() {
                let x = q.section(&y);
                proptest::prop_assert_eq!(q.projection().apply(&x), y);
            }
        }

        #[test]
        fn induced_maps_are_never_silently_wrong(
            orders in proptest::collection::vec(2i64..=6, 1..=2),
            tgt in 2i64..=6,
            raw_h in proptest::collection::vec(0i64..36, 0..=4),
            raw_f in proptest::collection::vec(0i64..36, 2),
        ) {
            let g = FinAbGroup::new(&orders).unwrap();
            let t = FinAbGroup::cyclic(tgt);
            let r = g.rank();
            let gens: Vec<Elem> = raw_h.chunks(r).filter(|c| c.len() == r).map(|c| g.reduce(c)).collect();
            let h = Subgroup::new(&g, gens).unwrap();
            let images: Vec<Elem> = g.orders().iter().enumerate().map(|(i, &d)| {
                let step = tgt / num_integer::gcd(d, tgt);
                vec![(raw_f[i] * step).rem_euclid(tgt)]
            }).collect();
            let f = AbHom::new(g.clone(), t, images).unwrap();
            match induced_map(&f, &h) {
                Ok((q, ind)) => {
                    for x in g.elements() {
                        proptest::prop_assert_eq!(ind.apply(&q.projection().apply(&x)), f.apply(&x));
                    }
                }
                Err(LinalgError::NotWellDefined { witness, .. }) => {
                    proptest::prop_assert!(h.contains(&witness));
                    proptest::prop_assert!(!f.target().is_zero(&f.apply(&witness)));
                }
                Err(e) => proptest::prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}

/// One argument of a bilinear map being pushed down to quotients.
#[derive(Clone, Copy, Debug)]
pub enum Side<'a> {
    Plain(&'a FinAbGroup),
    Quotient(&'a Quotient),
}

impl Side<'_> {
    fn group(&self) -> &FinAbGroup {
        match self {
            Side::Plain(g) => g,
            Side::Quotient(q) => q.group(),
        }
    }

    fn lifted(&self) -> &FinAbGroup {
        match self {
            Side::Plain(g) => g,
            Side::Quotient(q) => q.ambient(),
        }
    }

    fn lift(&self, i: usize) -> Elem {
        match self {
            Side::Plain(g) => g.generator(i),
            Side::Quotient(q) => q.section(&q.group().generator(i)),
        }
    }

    fn relations(&self) -> Vec<Elem> {
        match self {
            Side::Plain(_) => Vec::new(),
            Side::Quotient(q) => q.subgroup().canonical_basis(),
        }
    }
}

/// Builds a bilinear map on `left × right` (either side possibly a
/// quotient) from a formula `f(a, b)` on generator pairs of the lifted
/// groups. Fails if the formula does not vanish on the relations of a
/// quotient argument.
pub fn descend_bilinear(
    left: Side<'_>,
    right: Side<'_>,
    target: &FinAbGroup,
    f: impl FnMut(usize, usize) -> Elem,
) -> Result<Bilinear, LinalgError> {
    let big = Bilinear::from_fn(left.lifted(), right.lifted(), target, f)?;
    for r in left.relations() {
        for b in right.lifted().generators() {
            let v = big.apply(&r, &b);
            if !target.is_zero(&v) {
                return Err(LinalgError::NotWellDefined { witness: r, image: v });
            }
        }
    }
    for r in right.relations() {
        for a in left.lifted().generators() {
            let v = big.apply(&a, &r);
            if !target.is_zero(&v) {
                return Err(LinalgError::NotWellDefined { witness: r, image: v });
            }
        }
    }
    let lefts: Vec<Elem> = (0..left.group().rank()).map(|i| left.lift(i)).collect();
    let rights: Vec<Elem> = (0..right.group().rank()).map(|j| right.lift(j)).collect();
    let table = lefts
        .iter()
        .map(|x| rights.iter().map(|y| big.apply(x, y)).collect())
        .collect();
    Bilinear::new(left.group().clone(), right.group().clone(), target.clone(), table)
}
