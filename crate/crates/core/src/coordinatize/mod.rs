//! Rebuilding a Peirce-decomposed ring of rank `ℓ ≥ 4` from firm or
//! reduced commutator relations, and comparing it with a given ring.
//!
//! Off-diagonal blocks are the root modules and off-diagonal products are
//! the brackets. The diagonal blocks are built per index `s`:
//! - firm mode: `R_ss = (⊕_{i≠s} U_si ⊗ U_is) / Σ A_sijs`;
//! - reduced mode: `R_ss` is the span of the elements `⟨x, y, z⟩_ij` of
//!   `∏_{i≠s} End(U_is)^op × End(U_si)`.

mod firm;
mod reduced;

pub use firm::{build_a_subgroup, diagonal_presentation, firm_coordinatize, DiagonalPresentation, FirmOptions, RConsCertificate};
pub use reduced::{reduced_coordinatize, EndoPresentation, RGenCertificate};

use crate::commrel::{extract, CommRelData, RelFailure};
use crate::exact_linalg::{tensor_z, AbHom, Bilinear, FinAbGroup, LinalgError, Subgroup};
use crate::peirce::{check_predicates, PeirceError, PeirceHom, PeircePredicateReport, PeirceRing};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoordError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("the relations do not satisfy the required predicate: {0:?}")]
    Relations(RelFailure),
    #[error("indices ({0},{1},{2}) must be distinct")]
    IndexClash(usize, usize, usize),
    #[error("internal consistency alarm, map not well defined: {0}")]
    NotWellDefined(String),
    #[error("internal consistency alarm, projection not injective: {0}")]
    InjectivityFailure(String),
    #[error("not a ring homomorphism on blocks {triple:?}, generators {generators:?}")]
    NotHomomorphism {
        triple: (usize, usize, usize),
        generators: (usize, usize),
    },
    #[error(transparent)]
    Peirce(#[from] PeirceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Firm,
    Reduced,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Firm => "firm",
            Mode::Reduced => "reduced",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoordinatizationResult {
    pub ring: PeirceRing,
    pub mode: Mode,
    /// Firm mode only.
    pub r_cons: Vec<RConsCertificate>,
    /// Reduced mode only.
    pub r_gen: Vec<RGenCertificate>,
    pub lemma_ass: LemmaAssReport,
    pub predicates: PeircePredicateReport,
}

impl CoordinatizationResult {
    /// All certificates pass and the output has the predicates of its mode.
    pub fn certified(&self) -> bool {
        let mode_ok = match self.mode {
            Mode::Firm => self.predicates.is_firm(),
            Mode::Reduced => self.predicates.is_reduced(),
        };
        mode_ok
            && self.predicates.is_idempotent()
            && self.lemma_ass.all_hold()
            && self.r_cons.iter().all(|c| c.bijective)
            && self.r_gen.iter().all(|c| c.passed())
    }
}

pub(crate) fn require_rank(d: &CommRelData, required: usize) -> Result<(), CoordError> {
    if d.rank() < required {
        return Err(CoordError::PreconditionFailed(format!(
            "rank >= {required} required, got {}",
            d.rank()
        )));
    }
    Ok(())
}

/// Multiplication tables indexed `[i][j][k]`, filled in stages.
pub(crate) struct Tables {
    blocks: Vec<Vec<FinAbGroup>>,
    mult: Vec<Vec<Vec<Option<Bilinear>>>>,
}

impl Tables {
    /// Off-diagonal blocks and brackets from `d`, diagonal blocks given.
    pub(crate) fn new(d: &CommRelData, diagonal: Vec<FinAbGroup>) -> Self {
        let l = d.rank();
        let blocks: Vec<Vec<FinAbGroup>> = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| if i == j { diagonal[i].clone() } else { d.module(i, j).clone() })
                    .collect()
            })
            .collect();
        let mut mult = vec![vec![vec![None; l]; l]; l];
        for (&(i, j, k), m) in d.maps() {
            mult[i][j][k] = Some(m.clone());
        }
        Self { blocks, mult }
    }

    pub(crate) fn set(&mut self, (i, j, k): (usize, usize, usize), m: Bilinear) {
        debug_assert_eq!(m.left(), &self.blocks[i][j]);
        debug_assert_eq!(m.right(), &self.blocks[j][k]);
        debug_assert_eq!(m.target(), &self.blocks[i][k]);
        self.mult[i][j][k] = Some(m);
    }

    pub(crate) fn get(&self, i: usize, j: usize, k: usize) -> &Bilinear {
        self.mult[i][j][k].as_ref().expect("table filled in dependency order")
    }

    /// Assembles the ring and certifies associativity through
    /// [`verify_lemma_ass`].
    pub(crate) fn finish(self, modulus: i64, mode: Mode) -> Result<(PeirceRing, LemmaAssReport, PeircePredicateReport), CoordError> {
        let mult = self
            .mult
            .into_iter()
            .map(|a| a.into_iter().map(|b| b.into_iter().map(|m| m.expect("every product set")).collect()).collect())
            .collect();
        let ring = PeirceRing::new_unchecked(modulus, self.blocks, mult)?;
        let lemma_ass = verify_lemma_ass(&ring)?;
        if let Some(p) = lemma_ass.patterns.iter().find(|p| p.failure.is_some()) {
            let (indices, generators) = p.failure.expect("found a failure");
            return Err(CoordError::NotWellDefined(format!(
                "{} reconstruction is not associative: pattern {} at {indices:?}, generators {generators:?}",
                mode.name(),
                pattern_label(p.pattern)
            )));
        }
        let predicates = check_predicates(&ring);
        Ok((ring, lemma_ass, predicates))
    }
}

/// The 15 coincidence patterns of four indices `(i, j, k, l)`, as
/// restricted growth strings.
pub fn index_patterns() -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for b in 0..=1u8 {
        for c in 0..=b + 1 {
            let m = b.max(c);
            for d in 0..=m + 1 {
                out.push([0, b, c, d]);
            }
        }
    }
    out
}

/// The six patterns assumed in the associativity reduction: all distinct;
/// `l = i`; `k = i`; `l = j`; `i = k = l`; `i = j = l` (other indices
/// pairwise distinct).
pub const HYPOTHESIS_PATTERNS: [[u8; 4]; 6] = [[0, 1, 2, 3], [0, 1, 2, 0], [0, 1, 0, 2], [0, 1, 2, 1], [0, 1, 0, 0], [0, 0, 1, 0]];

pub fn pattern_of(ix: [usize; 4]) -> [u8; 4] {
    let mut seen: Vec<usize> = Vec::new();
    let mut out = [0; 4];
    for (p, &x) in ix.iter().enumerate() {
        out[p] = match seen.iter().position(|&y| y == x) {
            Some(c) => c as u8,
            None => {
                seen.push(x);
                (seen.len() - 1) as u8
            }
        };
    }
    out
}

/// `"i=l|j|k"` style label of a pattern.
pub fn pattern_label(p: [u8; 4]) -> String {
    let names = ['i', 'j', 'k', 'l'];
    let classes = *p.iter().max().expect("four entries") as usize + 1;
    (0..classes)
        .map(|c| {
            (0..4)
                .filter(|&a| p[a] as usize == c)
                .map(|a| names[a].to_string())
                .collect::<Vec<_>>()
                .join("=")
        })
        .collect::<Vec<_>>()
        .join("|")
}

type AssWitness = ((usize, usize, usize, usize), (usize, usize, usize));

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternCheck {
    pub pattern: [u8; 4],
    pub hypothesis: bool,
    pub checked: usize,
    pub failure: Option<AssWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaAssReport {
    pub patterns: Vec<PatternCheck>,
    /// First `(i, j, k)` with `i ≠ j ≠ k` and `R_ij R_jk ≠ R_ik`.
    pub surjectivity_failure: Option<(usize, usize, usize)>,
}

impl LemmaAssReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.surjectivity_failure.is_none() && self.patterns.iter().filter(|p| p.hypothesis).all(|p| p.failure.is_none())
    }

    pub fn all_hold(&self) -> bool {
        self.patterns.iter().all(|p| p.failure.is_none())
    }

    /// The derived patterns hold whenever the hypotheses do.
    pub fn derived_follow(&self) -> bool {
        !self.hypotheses_hold() || self.all_hold()
    }
}

/// Checks associativity on generator triples separately for each of the
/// 15 index coincidence patterns, and the surjectivity hypothesis.
pub fn verify_lemma_ass(r: &PeirceRing) -> Result<LemmaAssReport, CoordError> {
    let l = r.rank();
    if l < 4 {
        return Err(CoordError::PreconditionFailed(format!("rank >= 4 required, got {l}")));
    }
    let mut patterns: Vec<PatternCheck> = index_patterns()
        .into_iter()
        .map(|pattern| PatternCheck {
            pattern,
            hypothesis: HYPOTHESIS_PATTERNS.contains(&pattern),
            checked: 0,
            failure: None,
        })
        .collect();
    for i in 0..l {
        for j in 0..l {
            for k in 0..l {
                for m in 0..l {
                    let p = pattern_of([i, j, k, m]);
                    let check = patterns.iter_mut().find(|c| c.pattern == p).expect("all patterns listed");
                    check.checked += 1;
                    if check.failure.is_none() {
                        if let Some(g) = r.pattern_failure(i, j, k, m) {
                            check.failure = Some(((i, j, k, m), g));
                        }
                    }
                }
            }
        }
    }
    let mut surjectivity_failure = None;
    'outer: for i in 0..l {
        for j in 0..l {
            for k in 0..l {
                if i == j || j == k {
                    continue;
                }
                let m = r.mult(i, j, k);
                let span = Subgroup::new(m.target(), m.table().iter().flatten().cloned().collect())?;
                if !span.is_whole() {
                    surjectivity_failure = Some((i, j, k));
                    break 'outer;
                }
            }
        }
    }
    Ok(LemmaAssReport {
        patterns,
        surjectivity_failure,
    })
}

/// The homomorphism `built -> original` that is the identity on
/// off-diagonal blocks.
#[derive(Clone, Debug)]
pub struct ConnectingHom {
    pub hom: PeirceHom,
    pub bijective: Vec<Vec<bool>>,
    pub isomorphism: bool,
    /// `f_ii` agrees for every choice of the auxiliary index `j`.
    pub independent_of_j: bool,
}

/// Builds `f: built -> original` with `f_ij = id` for `i ≠ j` and
/// `f_ii(xy) = f_ij(x) f_ji(y)`, the latter factored through the
/// multiplication `built_ij ⊗ built_ji -> built_ii`.
pub fn connecting_hom(d: &CommRelData, built: &PeirceRing, original: &PeirceRing) -> Result<ConnectingHom, CoordError> {
    let l = d.rank();
    if l < 3 {
        return Err(CoordError::PreconditionFailed(format!("rank >= 3 required, got {l}")));
    }
    if extract(original) != *d {
        return Err(CoordError::PreconditionFailed(
            "the relations are not those of the original ring".into(),
        ));
    }
    if built.rank() != l || extract(built) != *d {
        return Err(CoordError::PreconditionFailed(
            "the built ring does not realize the relations".into(),
        ));
    }
    let mut blocks: Vec<Vec<AbHom>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| AbHom::zero(built.block(i, j), original.block(i, j)))
                .collect()
        })
        .collect();
    let mut independent_of_j = true;
    for i in 0..l {
        for j in 0..l {
            if i != j {
                blocks[i][j] = AbHom::identity(d.module(i, j));
            }
        }
        let mut chosen: Option<AbHom> = None;
        for j in (0..l).filter(|&j| j != i) {
            let t = tensor_z(built.block(i, j), built.block(j, i));
            let mu = built.mult(i, j, i).on_tensor(&t);
            let phi = original.mult(i, j, i).on_tensor(&t);
            if !mu.is_surjective() {
                return Err(CoordError::PreconditionFailed(format!(
                    "built_{i}{j} built_{j}{i} does not generate built_{i}{i}"
                )));
            }
            let f = mu.factor(&phi).map_err(|e| CoordError::NotWellDefined(format!("f_{i}{i} via {j}: {e}")))?;
            match &chosen {
                None => chosen = Some(f),
                Some(c) => independent_of_j &= *c == f,
            }
        }
        blocks[i][i] = chosen.expect("rank >= 3");
    }
    let hom = PeirceHom::new(built.clone(), original.clone(), blocks)?;
    if let Some((triple, generators)) = hom.multiplicativity_failure() {
        return Err(CoordError::NotHomomorphism { triple, generators });
    }
    let bijective = hom.bijective_blocks();
    let isomorphism = hom.is_isomorphism();
    Ok(ConnectingHom {
        hom,
        bijective,
        isomorphism,
        independent_of_j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peirce::{mat_ring, FinRing};

    #[test]
    fn fifteen_patterns() {
        let ps = index_patterns();
        assert_eq!(ps.len(), 15);
        let mut all = std::collections::BTreeSet::new();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        all.insert(pattern_of([i, j, k, l]));
                    }
                }
            }
        }
        assert_eq!(all.into_iter().collect::<Vec<_>>(), {
            let mut s = ps.clone();
            s.sort();
            s
        });
        assert!(HYPOTHESIS_PATTERNS.iter().all(|h| ps.contains(h)));
        assert_eq!(pattern_label([0, 1, 2, 0]), "i=l|j|k");
        assert_eq!(pattern_label([0, 0, 0, 0]), "i=j=k=l");
    }

    #[test]
    fn lemma_ass_on_mat4() {
        let r = mat_ring(4, &FinRing::cyclic(2)).unwrap();
        let rep = verify_lemma_ass(&r).unwrap();
        assert!(rep.hypotheses_hold() && rep.all_hold() && rep.derived_follow());
        assert_eq!(rep.patterns.iter().map(|p| p.checked).sum::<usize>(), 256);
    }

    #[test]
    fn lemma_ass_detects_corruption() {
        let r = mat_ring(4, &FinRing::cyclic(2)).unwrap();
        let bad = r.with_entry_unchecked((0, 1, 2), (0, 0), vec![0]).unwrap();
        let rep = verify_lemma_ass(&bad).unwrap();
        let distinct = rep.patterns.iter().find(|p| p.pattern == [0, 1, 2, 3]).unwrap();
        assert_eq!(distinct.failure.map(|f| f.0), Some((0, 1, 2, 3)));
        assert!(!rep.hypotheses_hold());
        assert!(rep.derived_follow());
    }

    #[test]
    fn lemma_ass_needs_rank_four() {
        let r = mat_ring(3, &FinRing::cyclic(2)).unwrap();
        assert!(matches!(verify_lemma_ass(&r), Err(CoordError::PreconditionFailed(_))));
    }

    #[test]
    fn self_comparison_is_identity() {
        let r = mat_ring(4, &FinRing::cyclic(3)).unwrap();
        let d = extract(&r);
        let c = connecting_hom(&d, &r, &r).unwrap();
        assert!(c.isomorphism && c.independent_of_j);
        assert_eq!(c.hom, PeirceHom::identity(&r));
    }
}
