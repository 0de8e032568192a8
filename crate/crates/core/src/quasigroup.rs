//! The group `R° = GL(R)` of quasi-invertible elements under
//! `x ∘ y = xy + x + y`, elementary transvections and the elementary
//! subgroup.
//!
//! Commutators are `[x, y] = x ∘ y ∘ x⁻¹ ∘ y⁻¹` and conjugation is
//! `ˣy = x ∘ y ∘ x⁻¹`, which is what the action formula
//! `ˣy = (xy + y) x⁻¹ + xy + y` computes.

use crate::exact_linalg::{AbHom, Elem, FinAbGroup};
use crate::peirce::{is_idempotent, FinRing, PeirceRing};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum QuasiError {
    #[error("{0:?} is not quasi-invertible")]
    NotQuasiInvertible(Elem),
    #[error("transvections need distinct indices and an element of the block, got ({i},{j}) with {elem:?}")]
    BlockMismatch { i: usize, j: usize, elem: Elem },
    #[error("closure exceeded the size bound after {partial} elements")]
    BoundExceeded { partial: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// An element of `R°` together with its quasi-inverse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuasiUnit {
    value: Elem,
    qinv: Elem,
}

impl QuasiUnit {
    pub fn identity(r: &FinRing) -> Self {
        Self {
            value: r.zero(),
            qinv: r.zero(),
        }
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn qinv(&self) -> &Elem {
        &self.qinv
    }

    pub fn inverse(&self) -> Self {
        Self {
            value: self.qinv.clone(),
            qinv: self.value.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.value.iter().all(|&c| c == 0)
    }
}

/// `xy + x + y`.
pub fn circ_value(r: &FinRing, x: &[i64], y: &[i64]) -> Elem {
    r.add(&r.add(&r.mul(x, y), x), y)
}

/// Solves `(1 + x)(1 + y) = 1` in the unitalization, i.e. `y + xy = -x`,
/// then checks the solution on both sides.
pub fn quasi_inverse(r: &FinRing, x: &[i64]) -> Result<QuasiUnit, QuasiError> {
    let g = r.additive();
    let x = g.reduce(x);
    let op = AbHom::identity(g)
        .add(&r.left_mult(&x))
        .expect("same domain");
    let y = op
        .preimage(&g.neg(&x))
        .ok_or_else(|| QuasiError::NotQuasiInvertible(x.clone()))?;
    if !g.is_zero(&circ_value(r, &x, &y)) || !g.is_zero(&circ_value(r, &y, &x)) {
        return Err(QuasiError::NotQuasiInvertible(x));
    }
    Ok(QuasiUnit { value: x, qinv: y })
}

pub fn circ(r: &FinRing, x: &QuasiUnit, y: &QuasiUnit) -> QuasiUnit {
    QuasiUnit {
        value: circ_value(r, &x.value, &y.value),
        qinv: circ_value(r, &y.qinv, &x.qinv),
    }
}

/// `ˣy = (xy + y) x⁻¹ + xy + y`.
pub fn act(r: &FinRing, x: &QuasiUnit, y: &[i64]) -> Elem {
    let xy_y = r.add(&r.mul(&x.value, y), y);
    r.add(&r.mul(&xy_y, &x.qinv), &xy_y)
}

/// Conjugation of a quasi-unit.
pub fn conj(r: &FinRing, x: &QuasiUnit, y: &QuasiUnit) -> QuasiUnit {
    QuasiUnit {
        value: act(r, x, &y.value),
        qinv: act(r, x, &y.qinv),
    }
}

/// `[x, y] = x ∘ y ∘ x⁻¹ ∘ y⁻¹`.
pub fn commutator(r: &FinRing, x: &QuasiUnit, y: &QuasiUnit) -> QuasiUnit {
    let xy = circ(r, x, y);
    let xyx = circ(r, &xy, &x.inverse());
    circ(r, &xyx, &y.inverse())
}

/// `t_ij(a)` for `a ∈ R_ij` given in block coordinates; its quasi-inverse
/// is `-a` since `a² = 0`.
pub fn transvection(p: &PeirceRing, i: usize, j: usize, a: &[i64]) -> Result<QuasiUnit, QuasiError> {
    if i == j || i >= p.rank() || j >= p.rank() || !p.block(i, j).contains(a) {
        return Err(QuasiError::BlockMismatch { i, j, elem: a.to_vec() });
    }
    let value = p.embed(i, j, a);
    let qinv = p.flat().neg(&value);
    Ok(QuasiUnit { value, qinv })
}

/// A Steinberg word: letters `(i, j, a)` standing for `x_ij(a)`.
pub type StWord = Vec<(usize, usize, Elem)>;

/// Image of a Steinberg word in `E(R)`.
pub fn eval_st_word(p: &PeirceRing, w: &[(usize, usize, Elem)]) -> Result<QuasiUnit, QuasiError> {
    let r = p.flat();
    w.iter().try_fold(QuasiUnit::identity(r), |acc, (i, j, a)| {
        Ok(circ(r, &acc, &transvection(p, *i, *j, a)?))
    })
}

/// Which elements of each block to range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sample {
    /// Every element of every block.
    Exhaustive,
    /// Generators of each block only.
    Generators,
}

type Letter = (usize, usize, Elem);

fn letters(p: &PeirceRing, sample: Sample, nonzero: bool) -> Vec<Letter> {
    let l = p.rank();
    let mut out = Vec::new();
    for i in 0..l {
        for j in 0..l {
            if i == j {
                continue;
            }
            let b = p.block(i, j);
            let elems: Vec<Elem> = match sample {
                Sample::Exhaustive => b.elements().collect(),
                Sample::Generators => b.generators(),
            };
            for a in elems {
                if !nonzero || !b.is_zero(&a) {
                    out.push((i, j, a));
                }
            }
        }
    }
    out
}

/// Outcome of one family of identities: how many instances were checked
/// and the first failing instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityCheck {
    pub checked: u64,
    pub failure: Option<Vec<Letter>>,
}

impl IdentityCheck {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<Letter>) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SteinbergReport {
    /// `t_ij(a) ∘ t_ij(b) = t_ij(a + b)`.
    pub additivity: IdentityCheck,
    /// `[t_ij(a), t_kl(b)] = 0` for `j ≠ k`, `i ≠ l`.
    pub commuting: IdentityCheck,
    /// `[t_ij(a), t_jk(b)] = t_ik(ab)` for `i ≠ k`.
    pub commutator: IdentityCheck,
    /// `[xy, z] = ˣ[y, z] [x, z]`.
    pub left: IdentityCheck,
    /// `[x, yz] = [x, y] ʸ[x, z]`.
    pub right: IdentityCheck,
    /// `ʸ[x, [y⁻¹, z]] ᶻ[y, [z⁻¹, x]] ˣ[z, [x⁻¹, y]] = 1`.
    pub hall_witt: IdentityCheck,
}

impl SteinbergReport {
    pub fn passed(&self) -> bool {
        [&self.additivity, &self.commuting, &self.commutator, &self.left, &self.right, &self.hall_witt]
            .iter()
            .all(|c| c.passed())
    }
}

/// Checks the Steinberg relations on pairs of transvections and the
/// identities (L), (R), (HW) on triples.
pub fn verify_steinberg(p: &PeirceRing, sample: Sample) -> SteinbergReport {
    let r = p.flat();
    let mut rep = SteinbergReport::default();
    let ls = letters(p, sample, false);
    let ts: Vec<QuasiUnit> = ls
        .iter()
        .map(|(i, j, a)| transvection(p, *i, *j, a).expect("letters lie in their blocks"))
        .collect();
    for (tx, lx) in ts.iter().zip(&ls) {
        let (i, j, a) = lx;
        for (ty, ly) in ts.iter().zip(&ls) {
            let (k, l, b) = ly;
            let wit = || vec![lx.clone(), ly.clone()];
            if (i, j) == (k, l) {
                let sum = p.block(*i, *j).add(a, b);
                let lhs = circ(r, tx, ty);
                rep.additivity.record(lhs == transvection(p, *i, *j, &sum).unwrap(), wit);
            } else if j != k && i != l {
                rep.commuting.record(commutator(r, tx, ty).is_identity(), wit);
            } else if j == k && i != l {
                let ab = p.mult(*i, *j, *l).apply(a, b);
                let expect = transvection(p, *i, *l, &ab).unwrap();
                rep.commutator.record(commutator(r, tx, ty) == expect, wit);
            }
        }
    }
    let triples = letters(p, sample, true);
    let tt: Vec<QuasiUnit> = triples
        .iter()
        .map(|(i, j, a)| transvection(p, *i, *j, a).unwrap())
        .collect();
    for (x, lx) in tt.iter().zip(&triples) {
        for (y, ly) in tt.iter().zip(&triples) {
            let xy = circ(r, x, y);
            for (z, lz) in tt.iter().zip(&triples) {
                let wit = || vec![lx.clone(), ly.clone(), lz.clone()];
                let lhs = commutator(r, &xy, z);
                let rhs = circ(r, &conj(r, x, &commutator(r, y, z)), &commutator(r, x, z));
                rep.left.record(lhs == rhs, wit);
                let yz = circ(r, y, z);
                let lhs = commutator(r, x, &yz);
                let rhs = circ(r, &commutator(r, x, y), &conj(r, y, &commutator(r, x, z)));
                rep.right.record(lhs == rhs, wit);
                let h1 = conj(r, y, &commutator(r, x, &commutator(r, &y.inverse(), z)));
                let h2 = conj(r, z, &commutator(r, y, &commutator(r, &z.inverse(), x)));
                let h3 = conj(r, x, &commutator(r, z, &commutator(r, &x.inverse(), y)));
                rep.hall_witt.record(circ(r, &circ(r, &h1, &h2), &h3).is_identity(), wit);
            }
        }
    }
    rep
}

/// Checks that `ˣ(-)` is a ring automorphism on generators and that
/// `ˣ(ʸz) = ˣ∘ʸz`, for all `x`, `y` in `units`. Returns the first failing
/// pair of indices into `units` (equal indices for a single-element
/// failure) and the generator involved.
pub fn verify_action(r: &FinRing, units: &[QuasiUnit]) -> Result<u64, (usize, usize, usize)> {
    let gens = r.additive().generators();
    let mut checked = 0;
    for (a, x) in units.iter().enumerate() {
        let images: Vec<Elem> = gens.iter().map(|g| act(r, x, g)).collect();
        for (gi, g) in gens.iter().enumerate() {
            for (hi, h) in gens.iter().enumerate() {
                checked += 1;
                if act(r, x, &r.mul(g, h)) != r.mul(&images[gi], &images[hi])
                    || act(r, x, &r.add(g, h)) != r.add(&images[gi], &images[hi])
                {
                    return Err((a, a, gi));
                }
            }
        }
        for (b, y) in units.iter().enumerate() {
            let xy = circ(r, x, y);
            for (gi, g) in gens.iter().enumerate() {
                checked += 1;
                if act(r, &xy, g) != act(r, x, &act(r, y, g)) {
                    return Err((a, b, gi));
                }
            }
        }
    }
    Ok(checked)
}

/// Transvections `t_ij(g)` on generators `g` of the off-diagonal blocks.
pub fn transvection_generators(p: &PeirceRing) -> Vec<QuasiUnit> {
    letters(p, Sample::Generators, true)
        .iter()
        .map(|(i, j, a)| transvection(p, *i, *j, a).unwrap())
        .collect()
}

pub const DEFAULT_SIZE_BOUND: usize = 1 << 20;

/// Closure of the transvection generators under `∘`, by breadth-first
/// search. In a finite group this is the generated subgroup. The result is
/// sorted by value.
pub fn elementary_subgroup(p: &PeirceRing, size_bound: usize) -> Result<Vec<QuasiUnit>, QuasiError> {
    closure(p.flat(), &transvection_generators(p), size_bound)
}

/// Subgroup of `R°` generated by `gens`.
pub fn closure(r: &FinRing, gens: &[QuasiUnit], size_bound: usize) -> Result<Vec<QuasiUnit>, QuasiError> {
    let id = QuasiUnit::identity(r);
    let mut seen: HashMap<Elem, Elem> = HashMap::new();
    seen.insert(id.value.clone(), id.qinv.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = circ(r, &x, g);
            if !seen.contains_key(&y.value) {
                if seen.len() >= size_bound {
                    return Err(QuasiError::BoundExceeded { partial: seen.len() });
                }
                seen.insert(y.value.clone(), y.qinv.clone());
                queue.push_back(y);
            }
        }
    }
    let sorted: BTreeMap<Elem, Elem> = seen.into_iter().collect();
    Ok(sorted.into_iter().map(|(value, qinv)| QuasiUnit { value, qinv }).collect())
}

/// `t_ij(a)` written as a product of commutators `[t_ik(b), t_kj(c)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectnessWitness {
    pub target: Letter,
    pub via: usize,
    pub factors: Vec<(Elem, Elem)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterReport {
    /// One witness per transvection generator.
    pub perfectness: Vec<PerfectnessWitness>,
    /// Number of upper triangular elements `∏_{i<j} t_ij(x_ij)`.
    pub upper_triangular: usize,
    /// Upper triangular elements commuting with every transvection.
    pub central: Vec<Elem>,
    /// Pairs of distinct upper triangular elements acting identically.
    pub act_collisions: Vec<(Elem, Elem)>,
}

impl CenterReport {
    pub fn passed(&self) -> bool {
        self.central.len() == 1 && self.central[0].iter().all(|&c| c == 0) && self.act_collisions.is_empty()
    }
}

/// Perfectness witnesses for every transvection generator, the central
/// upper triangular elements, and injectivity of the action on them.
pub fn perfectness_and_center(p: &PeirceRing, size_bound: usize) -> Result<CenterReport, QuasiError> {
    let l = p.rank();
    if l < 3 {
        return Err(QuasiError::PreconditionFailed(format!("rank >= 3 required, got {l}")));
    }
    is_idempotent(p).map_err(|w| QuasiError::PreconditionFailed(format!("not idempotent: {w:?}")))?;
    let r = p.flat();
    let mut perfectness = Vec::new();
    for (i, j, a) in letters(p, Sample::Generators, true) {
        let k = (0..l).find(|&k| k != i && k != j).expect("rank >= 3");
        let (bik, bkj) = (p.block(i, k), p.block(k, j));
        let pairs: Vec<(Elem, Elem)> = bik
            .generators()
            .into_iter()
            .flat_map(|b| bkj.generators().into_iter().map(move |c| (b.clone(), c)))
            .collect();
        let m = p.mult(i, k, j);
        let orders: Vec<i64> = pairs.iter().map(|(b, c)| bik.elem_order(b).max(bkj.elem_order(c))).collect();
        let free = FinAbGroup::new(&orders).expect("positive orders");
        let images = pairs.iter().map(|(b, c)| m.apply(b, c)).collect();
        let phi = AbHom::new(free, p.block(i, j).clone(), images)
            .map_err(|e| QuasiError::PreconditionFailed(e.to_string()))?;
        let coeffs = phi
            .preimage(&a)
            .ok_or_else(|| QuasiError::PreconditionFailed(format!("t_{i}{j}({a:?}) is not a product of commutators")))?;
        let mut factors = Vec::new();
        let mut acc = QuasiUnit::identity(r);
        for ((b, c), &n) in pairs.iter().zip(&coeffs) {
            if n == 0 {
                continue;
            }
            let nb = bik.scale(n, b);
            let com = commutator(r, &transvection(p, i, k, &nb)?, &transvection(p, k, j, c)?);
            acc = circ(r, &acc, &com);
            factors.push((nb, c.clone()));
        }
        if acc != transvection(p, i, j, &a)? {
            return Err(QuasiError::PreconditionFailed(format!("commutator product for t_{i}{j} does not evaluate correctly")));
        }
        perfectness.push(PerfectnessWitness {
            target: (i, j, a),
            via: k,
            factors,
        });
    }
    let upper: Vec<(usize, usize)> = (0..l).flat_map(|i| (i + 1..l).map(move |j| (i, j))).collect();
    let size: u128 = upper.iter().map(|&(i, j)| p.block(i, j).order()).product();
    if size > size_bound as u128 {
        return Err(QuasiError::BoundExceeded { partial: 0 });
    }
    let mut elems = vec![QuasiUnit::identity(r)];
    for &(i, j) in &upper {
        let mut next = Vec::with_capacity(elems.len() * p.block(i, j).order() as usize);
        for x in &elems {
            for a in p.block(i, j).elements() {
                next.push(circ(r, x, &transvection(p, i, j, &a)?));
            }
        }
        elems = next;
    }
    let gens = transvection_generators(p);
    let central: Vec<Elem> = elems
        .iter()
        .filter(|g| gens.iter().all(|t| circ(r, g, t) == circ(r, t, g)))
        .map(|g| g.value.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ring_gens = r.additive().generators();
    let mut by_action: BTreeMap<Vec<Elem>, Elem> = BTreeMap::new();
    let mut act_collisions = Vec::new();
    for g in &elems {
        let sig: Vec<Elem> = ring_gens.iter().map(|h| act(r, g, h)).collect();
        match by_action.get(&sig) {
            Some(prev) if prev != &g.value => act_collisions.push((prev.clone(), g.value.clone())),
            Some(_) => {}
            None => {
                by_action.insert(sig, g.value.clone());
            }
        }
    }
    Ok(CenterReport {
        perfectness,
        upper_triangular: elems.len(),
        central,
        act_collisions,
    })
}
