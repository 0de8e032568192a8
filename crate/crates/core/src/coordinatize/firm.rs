use super::{require_rank, CoordError, CoordinatizationResult, Mode, Tables};
use crate::commrel::{check_firm_rel, check_k_linear, CommRelData};
use crate::exact_linalg::{
    descend_bilinear, quotient, subgroup_equal, tensor_z, AbHom, Bilinear, Elem, FinAbGroup, Quotient, Side,
    Subgroup, TensorZ,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FirmOptions {
    /// Lay out the summands `U_si ⊗ U_is` in decreasing order of `i`.
    pub reverse_summands: bool,
}

/// Generators `(x ⊗ yz, -(xy) ⊗ z)` of `A_sijs` over generator triples,
/// as pairs of elements of `U_si ⊗ U_is` and `U_sj ⊗ U_js`.
fn a_generators(d: &CommRelData, ti: &TensorZ, tj: &TensorZ, s: usize, i: usize, j: usize) -> Vec<(Elem, Elem)> {
    let mut out = Vec::new();
    for x in d.module(s, i).generators() {
        for y in d.module(i, j).generators() {
            let xy = d.cmap(s, i, j).apply(&x, &y);
            for z in d.module(j, s).generators() {
                let yz = d.cmap(i, j, s).apply(&y, &z);
                out.push((ti.pure(&x, &yz), tj.group().neg(&tj.pure(&xy, &z))));
            }
        }
    }
    out
}

/// `A_sijs` as a subgroup of `(U_si ⊗ U_is) ⊕ (U_sj ⊗ U_js)`.
pub fn build_a_subgroup(d: &CommRelData, s: usize, i: usize, j: usize) -> Result<Subgroup, CoordError> {
    if s == i || i == j || j == s {
        return Err(CoordError::IndexClash(s, i, j));
    }
    let ti = tensor_z(d.module(s, i), d.module(i, s));
    let tj = tensor_z(d.module(s, j), d.module(j, s));
    let (sum, _) = FinAbGroup::direct_sum([ti.group(), tj.group()]);
    let gens = a_generators(d, &ti, &tj, s, i, j)
        .into_iter()
        .map(|(a, b)| [a, b].concat())
        .collect();
    Ok(Subgroup::new(&sum, gens)?)
}

/// `R_ss = (⊕_{i≠s} U_si ⊗ U_is) / Σ A_sijs`.
#[derive(Clone, Debug)]
pub struct DiagonalPresentation {
    pub s: usize,
    /// Summand indices in layout order.
    pub summands: Vec<usize>,
    tensors: Vec<TensorZ>,
    offsets: Vec<usize>,
    pub quotient: Quotient,
}

impl DiagonalPresentation {
    fn pos(&self, i: usize) -> usize {
        self.summands.iter().position(|&k| k == i).expect("summand index")
    }

    pub fn tensor(&self, i: usize) -> &TensorZ {
        &self.tensors[self.pos(i)]
    }

    pub fn ambient(&self) -> &FinAbGroup {
        self.quotient.ambient()
    }

    pub fn relations(&self) -> &Subgroup {
        self.quotient.subgroup()
    }

    pub fn group(&self) -> &FinAbGroup {
        self.quotient.group()
    }

    /// An element of summand `i` placed in the direct sum.
    pub fn embed(&self, i: usize, t: &[i64]) -> Elem {
        let mut v = self.ambient().zero_elem();
        let o = self.offsets[self.pos(i)];
        v[o..o + t.len()].copy_from_slice(t);
        v
    }

    /// The class of `x ⊗ y` for `x ∈ U_si`, `y ∈ U_is`.
    pub fn class(&self, i: usize, x: &[i64], y: &[i64]) -> Elem {
        self.quotient.projection().apply(&self.embed(i, &self.tensor(i).pure(x, y)))
    }

    /// For each ambient generator: its summand index and generator pair.
    fn generator_owners(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (p, t) in self.tensors.iter().enumerate() {
            for (a, b) in t.generator_pairs() {
                out.push((self.summands[p], a, b));
            }
        }
        out
    }

    /// Projection restricted to the summands not in `skip`, with the
    /// owners of the restricted generators.
    fn restricted(&self, skip: usize) -> (AbHom, Vec<(usize, usize, usize)>) {
        let kept: Vec<usize> = self.summands.iter().copied().filter(|&k| k != skip).collect();
        let (sum, _) = FinAbGroup::direct_sum(kept.iter().map(|&k| self.tensor(k).group()));
        let mut owners = Vec::new();
        let mut images = Vec::new();
        for &k in &kept {
            let t = self.tensor(k);
            for (g, (a, b)) in t.generator_pairs().into_iter().enumerate() {
                owners.push((k, a, b));
                images.push(self.quotient.projection().apply(&self.embed(k, &t.group().generator(g))));
            }
        }
        (AbHom::new(sum, self.group().clone(), images).expect("projection is a homomorphism"), owners)
    }
}

pub fn diagonal_presentation(d: &CommRelData, s: usize, opts: FirmOptions) -> Result<DiagonalPresentation, CoordError> {
    let l = d.rank();
    let mut summands: Vec<usize> = (0..l).filter(|&i| i != s).collect();
    if opts.reverse_summands {
        summands.reverse();
    }
    let tensors: Vec<TensorZ> = summands.iter().map(|&i| tensor_z(d.module(s, i), d.module(i, s))).collect();
    let (ambient, offsets) = FinAbGroup::direct_sum(tensors.iter().map(|t| t.group()));
    let place = |p: usize, t: &[i64], v: &mut Elem| v[offsets[p]..offsets[p] + t.len()].copy_from_slice(t);
    let mut gens = Vec::new();
    for (pi, &i) in summands.iter().enumerate() {
        for (pj, &j) in summands.iter().enumerate() {
            if i == j {
                continue;
            }
            for (a, b) in a_generators(d, &tensors[pi], &tensors[pj], s, i, j) {
                let mut v = ambient.zero_elem();
                place(pi, &a, &mut v);
                place(pj, &b, &mut v);
                gens.push(v);
            }
        }
    }
    let relations = Subgroup::new(&ambient, gens)?;
    Ok(DiagonalPresentation {
        s,
        summands,
        tensors,
        offsets,
        quotient: quotient(&ambient, &relations)?,
    })
}

/// The canonical map `((U_si ⊗ U_is) ⊕ (U_sj ⊗ U_js)) / (A_sijs + A_sjis) -> R_ss`
/// is bijective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RConsCertificate {
    pub s: usize,
    pub i: usize,
    pub j: usize,
    pub bijective: bool,
}

fn r_cons(d: &CommRelData, p: &DiagonalPresentation, i: usize, j: usize) -> Result<RConsCertificate, CoordError> {
    let s = p.s;
    let (ti, tj) = (p.tensor(i), p.tensor(j));
    let (pair, off) = FinAbGroup::direct_sum([ti.group(), tj.group()]);
    let mut images = Vec::new();
    for g in ti.group().generators() {
        images.push(p.quotient.projection().apply(&p.embed(i, &g)));
    }
    for g in tj.group().generators() {
        images.push(p.quotient.projection().apply(&p.embed(j, &g)));
    }
    let map = AbHom::new(pair.clone(), p.group().clone(), images)?;
    let mut gens: Vec<Elem> = a_generators(d, ti, tj, s, i, j).into_iter().map(|(a, b)| [a, b].concat()).collect();
    for (b, a) in a_generators(d, tj, ti, s, j, i) {
        let mut v = pair.zero_elem();
        v[..a.len()].copy_from_slice(&a);
        v[off[1]..].copy_from_slice(&b);
        gens.push(v);
    }
    let a_sum = Subgroup::new(&pair, gens)?;
    Ok(RConsCertificate {
        s,
        i,
        j,
        bijective: map.is_surjective() && subgroup_equal(&map.kernel(), &a_sum),
    })
}

fn not_well_defined(what: String) -> impl FnOnce(crate::exact_linalg::LinalgError) -> CoordError {
    move |e| CoordError::NotWellDefined(format!("{what}: {e}"))
}

/// Left or right action of `R_ss` on an off-diagonal block, given by a
/// formula on the summands `U_sk ⊗ U_ks` with `k ≠ skip`.
fn induced_action(
    p: &DiagonalPresentation,
    module: &FinAbGroup,
    skip: usize,
    formula: impl Fn(usize, &Elem, &Elem, &Elem) -> Elem,
) -> Result<Vec<Vec<Elem>>, crate::exact_linalg::LinalgError> {
    let (proj, owners) = p.restricted(skip);
    let ws = module.generators();
    let images: Vec<Elem> = owners
        .iter()
        .map(|&(k, a, b)| {
            let t = p.tensor(k);
            let (x, y) = (t.left().generator(a), t.right().generator(b));
            ws.iter().flat_map(|w| formula(k, &x, &y, w)).collect()
        })
        .collect();
    let (stacked, _) = FinAbGroup::direct_sum(std::iter::repeat(module).take(ws.len()));
    let f = AbHom::new(proj.source().clone(), stacked, images)?;
    let g = proj.factor(&f)?;
    let r = module.rank();
    Ok(g.images()
        .iter()
        .map(|v| (0..ws.len()).map(|w| v[w * r..(w + 1) * r].to_vec()).collect())
        .collect())
}

/// Reconstruction from firm relations: `R_ss` is the quotient of
/// `⊕_{i≠s} U_si ⊗ U_is` by the `A_sijs`, with products induced from
/// `(xy)w = x(yw)`, `w(xy) = (wx)y` and `(xy)u = x(yu)`.
pub fn firm_coordinatize(d: &CommRelData, opts: FirmOptions) -> Result<CoordinatizationResult, CoordError> {
    require_rank(d, 4)?;
    check_k_linear(d).map_err(|a| CoordError::PreconditionFailed(format!("module of root {a:?} is not a Z/{}-module", d.modulus())))?;
    check_firm_rel(d).map_err(CoordError::Relations)?;
    let l = d.rank();
    let pres: Vec<DiagonalPresentation> = (0..l).map(|s| diagonal_presentation(d, s, opts)).collect::<Result<_, _>>()?;
    let mut r_cons_certs = Vec::new();
    for p in &pres {
        for &i in &p.summands {
            for &j in &p.summands {
                if i < j {
                    r_cons_certs.push(r_cons(d, p, i, j)?);
                }
            }
        }
    }
    let mut t = Tables::new(d, pres.iter().map(|p| p.group().clone()).collect());
    for p in &pres {
        let s = p.s;
        let rss = p.group().clone();
        for &i in &p.summands {
            let m = Bilinear::from_fn(d.module(s, i), d.module(i, s), &rss, |a, b| {
                p.class(i, &d.module(s, i).generator(a), &d.module(i, s).generator(b))
            })?;
            t.set((s, i, s), m);
            // (x ⊗ y) w = x (y w) on summands k ≠ i
            let left = induced_action(p, d.module(s, i), i, |k, x, y, w| {
                d.cmap(s, k, i).apply(x, &d.cmap(k, s, i).apply(y, w))
            })
            .map_err(not_well_defined(format!("R_{s}{s} x R_{s}{i}")))?;
            t.set((s, s, i), Bilinear::new(rss.clone(), d.module(s, i).clone(), d.module(s, i).clone(), left)?);
            // w (x ⊗ y) = (w x) y on summands k ≠ i
            let right = induced_action(p, d.module(i, s), i, |k, x, y, w| {
                d.cmap(i, k, s).apply(&d.cmap(i, s, k).apply(w, x), y)
            })
            .map_err(not_well_defined(format!("R_{i}{s} x R_{s}{s}")))?;
            let table: Vec<Vec<Elem>> = (0..d.module(i, s).rank())
                .map(|w| (0..rss.rank()).map(|g| right[g][w].clone()).collect())
                .collect();
            t.set((i, s, s), Bilinear::new(d.module(i, s).clone(), rss.clone(), d.module(i, s).clone(), table)?);
        }
    }
    for p in &pres {
        let s = p.s;
        let rss = p.group().clone();
        let owners = p.generator_owners();
        // (x ⊗ y) u = x (y u)
        let m = descend_bilinear(Side::Quotient(&p.quotient), Side::Plain(&rss), &rss, |a, b| {
            let (i, ga, gb) = owners[a];
            let tn = p.tensor(i);
            let yu = t.get(i, s, s).apply(&tn.right().generator(gb), &rss.generator(b));
            t.get(s, i, s).apply(&tn.left().generator(ga), &yu)
        })
        .map_err(not_well_defined(format!("R_{s}{s} x R_{s}{s}")))?;
        t.set((s, s, s), m);
    }
    let (ring, lemma_ass, predicates) = t.finish(d.modulus(), Mode::Firm)?;
    Ok(CoordinatizationResult {
        ring,
        mode: Mode::Firm,
        r_cons: r_cons_certs,
        r_gen: Vec::new(),
        lemma_ass,
        predicates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commrel::extract;
    use crate::coordinatize::connecting_hom;
    use crate::peirce::{grouped_mat_ring, mat_ring, FinRing};

    fn mat(l: usize, n: i64) -> CommRelData {
        extract(&mat_ring(l, &FinRing::cyclic(n)).unwrap())
    }

    #[test]
    fn a_subgroup_examples() {
        let a = build_a_subgroup(&mat(4, 2), 0, 1, 2).unwrap();
        let mut elems: Vec<Elem> = a.ambient().elements().filter(|x| a.contains(x)).collect();
        elems.sort();
        assert_eq!(elems, vec![vec![0, 0], vec![1, 1]]);
        let a3 = build_a_subgroup(&mat(4, 3), 3, 0, 2).unwrap();
        assert_eq!(a3.order(), 3);
        assert!(a3.contains(&[1, 2]) && !a3.contains(&[1, 1]));
        assert_eq!(build_a_subgroup(&mat(4, 2), 1, 1, 2), Err(CoordError::IndexClash(1, 1, 2)));
    }

    #[test]
    fn mat4_roundtrip() {
        for n in [2, 3] {
            let r = mat_ring(4, &FinRing::cyclic(n)).unwrap();
            let d = extract(&r);
            let out = firm_coordinatize(&d, FirmOptions::default()).unwrap();
            assert!(out.certified());
            assert_eq!(out.r_cons.len(), 12);
            assert!((0..4).all(|s| out.ring.block(s, s).order() == n as u128));
            let c = connecting_hom(&d, &out.ring, &r).unwrap();
            assert!(c.isomorphism && c.independent_of_j);
        }
    }

    #[test]
    fn grouped_mat5_roundtrip() {
        let r = grouped_mat_ring(5, 2, &[vec![0], vec![1], vec![2], vec![3, 4]]).unwrap();
        let d = extract(&r);
        let out = firm_coordinatize(&d, FirmOptions::default()).unwrap();
        assert!(out.certified());
        assert_eq!(out.ring.block(3, 3).order(), 16);
        assert!(connecting_hom(&d, &out.ring, &r).unwrap().isomorphism);
    }

    #[test]
    fn summand_order_does_not_matter() {
        let d = mat(4, 3);
        let a = firm_coordinatize(&d, FirmOptions::default()).unwrap();
        let b = firm_coordinatize(&d, FirmOptions { reverse_summands: true }).unwrap();
        let c = connecting_hom(&d, &a.ring, &b.ring).unwrap();
        assert!(c.isomorphism);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(c.hom.block(i, j), &AbHom::identity(d.module(i, j)));
                }
            }
        }
    }

    #[test]
    fn zero_data() {
        let z = FinRing::new_unchecked(Bilinear::zero(&FinAbGroup::zero(), &FinAbGroup::zero(), &FinAbGroup::zero()), None).unwrap();
        let d = extract(&mat_ring(4, &z).unwrap());
        let out = firm_coordinatize(&d, FirmOptions::default()).unwrap();
        assert_eq!(out.ring.order(), 1);
    }

    #[test]
    fn rank_three_is_rejected() {
        assert!(matches!(
            firm_coordinatize(&mat(3, 2), FirmOptions::default()),
            Err(CoordError::PreconditionFailed(_))
        ));
    }
}
