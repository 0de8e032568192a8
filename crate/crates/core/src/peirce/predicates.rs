use super::{FinRing, PeirceRing, RingTensor};
use crate::exact_linalg::{AbHom, Elem, Subgroup};

/// `R_ij R_jk != R_ik`; `missing` is an element of `R_ik` outside the span
/// of products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentWitness {
    pub triple: (usize, usize, usize),
    pub missing: Elem,
}

/// `R_ij ⊗_{R_jj} R_jk -> R_ik` is not bijective. `kernel` is a nonzero
/// kernel element (in tensor coordinates) and `missing` an element of `R_ik`
/// outside the image, whichever exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirmWitness {
    pub triple: (usize, usize, usize),
    pub kernel: Option<Elem>,
    pub missing: Option<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReducedWitness {
    NotIdempotent(IdempotentWitness),
    /// A nonzero `x ∈ R_ij` with `xR = Rx = 0`.
    Annihilator { block: (usize, usize), element: Elem },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeircePredicateReport {
    pub idempotent: Result<(), IdempotentWitness>,
    pub firm: Result<(), FirmWitness>,
    pub reduced: Result<(), ReducedWitness>,
}

impl PeircePredicateReport {
    pub fn is_idempotent(&self) -> bool {
        self.idempotent.is_ok()
    }

    pub fn is_firm(&self) -> bool {
        self.firm.is_ok()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced.is_ok()
    }
}

pub fn check_predicates(r: &PeirceRing) -> PeircePredicateReport {
    let idempotent = is_idempotent(r);
    let reduced = match &idempotent {
        Err(w) => Err(ReducedWitness::NotIdempotent(w.clone())),
        Ok(()) => annihilator_witness(r),
    };
    PeircePredicateReport {
        idempotent,
        firm: is_firm(r),
        reduced,
    }
}

/// The subgroup of `R_ik` spanned by products of generators of `R_ij` and
/// `R_jk`.
pub(crate) fn product_span(r: &PeirceRing, i: usize, j: usize, k: usize) -> Subgroup {
    let m = r.mult(i, j, k);
    let gens = m.table().iter().flatten().cloned().collect();
    Subgroup::new(r.block(i, k), gens).expect("products lie in the block")
}

pub fn is_idempotent(r: &PeirceRing) -> Result<(), IdempotentWitness> {
    let l = r.rank();
    for i in 0..l {
        for j in 0..l {
            for k in 0..l {
                let span = product_span(r, i, j, k);
                if let Some(missing) = r.block(i, k).generators().into_iter().find(|g| !span.contains(g)) {
                    return Err(IdempotentWitness {
                        triple: (i, j, k),
                        missing,
                    });
                }
            }
        }
    }
    Ok(())
}

/// `R_ij ⊗_{R_jj} R_jk` together with the multiplication map to `R_ik`.
pub(crate) fn middle_tensor(r: &PeirceRing, i: usize, j: usize, k: usize) -> (RingTensor, AbHom) {
    let t = RingTensor::balanced(r.mult(i, j, j), r.mult(j, j, k));
    let mu = t
        .linearize(r.mult(i, j, k))
        .expect("associativity makes the multiplication balanced");
    (t, mu)
}

pub fn is_firm(r: &PeirceRing) -> Result<(), FirmWitness> {
    let l = r.rank();
    for i in 0..l {
        for j in 0..l {
            for k in 0..l {
                let (_, mu) = middle_tensor(r, i, j, k);
                let kernel = mu.kernel().canonical_basis().into_iter().next();
                let image = mu.image();
                let missing = r.block(i, k).generators().into_iter().find(|g| !image.contains(g));
                if kernel.is_some() || missing.is_some() {
                    return Err(FirmWitness {
                        triple: (i, j, k),
                        kernel,
                        missing,
                    });
                }
            }
        }
    }
    Ok(())
}

/// `I_ij = {x ∈ R_ij | x R = R x = 0}`.
pub fn annihilator_block(r: &PeirceRing, i: usize, j: usize) -> Subgroup {
    let src = r.block(i, j);
    let mut maps = Vec::new();
    for k in 0..r.rank() {
        for g in r.block(j, k).generators() {
            maps.push(r.mult(i, j, k).fix_right(&g));
        }
        for g in r.block(k, i).generators() {
            maps.push(r.mult(k, i, j).fix_left(&g));
        }
    }
    if maps.is_empty() {
        return Subgroup::whole(src);
    }
    AbHom::stack(src, &maps).expect("common source").kernel()
}

fn annihilator_witness(r: &PeirceRing) -> Result<(), ReducedWitness> {
    for i in 0..r.rank() {
        for j in 0..r.rank() {
            if let Some(element) = annihilator_block(r, i, j).canonical_basis().into_iter().next() {
                return Err(ReducedWitness::Annihilator { block: (i, j), element });
            }
        }
    }
    Ok(())
}

pub fn is_reduced(r: &PeirceRing) -> Result<(), ReducedWitness> {
    is_idempotent(r).map_err(ReducedWitness::NotIdempotent)?;
    annihilator_witness(r)
}

/// Identities of the corner rings `R_ii`, as flat elements, when every
/// corner has one.
pub fn local_units(r: &PeirceRing) -> Option<Vec<Elem>> {
    (0..r.rank())
        .map(|i| r.corner(i).find_unit().map(|u| r.embed(i, i, &u)))
        .collect()
}

/// Tests `R e_i R = R` for each idempotent by generating the subgroup of
/// products `g e_i h` over ring generators. Returns the first index that is
/// not full.
pub fn fullness(ring: &FinRing, idems: &[Elem]) -> Result<(), usize> {
    let gens = ring.additive().generators();
    for (i, e) in idems.iter().enumerate() {
        let left: Vec<Elem> = gens.iter().map(|g| ring.mul(g, e)).collect();
        let prods = left
            .iter()
            .flat_map(|x| gens.iter().map(move |h| (x, h)))
            .map(|(x, h)| ring.mul(x, h))
            .collect();
        let span = Subgroup::new(ring.additive(), prods).expect("products lie in the ring");
        if !span.is_whole() {
            return Err(i);
        }
    }
    Ok(())
}
