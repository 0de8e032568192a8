//! Runs every structural check the library knows about on one ring and
//! collects pass/fail/skip outcomes with witnesses.

use crate::commrel::{check_firm_rel, check_idempotent_rel, check_k_linear, check_reduced_rel, extract};
use crate::coordinatize::{connecting_hom, firm_coordinatize, reduced_coordinatize, verify_lemma_ass, CoordinatizationResult, CoordError, FirmOptions};
use crate::exact_linalg::FinAbGroup;
use crate::peirce::{
    check_predicates, collapse_rank, fullness, local_units, morita_ring, reduced_quotient, regroup, universal_ring, FinRing,
    PeirceRing,
};
use crate::quasigroup::{
    perfectness_and_center, transvection, verify_action, verify_steinberg, QuasiError, QuasiUnit, Sample, DEFAULT_SIZE_BOUND,
};
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    /// What was checked, or why the check was skipped.
    pub detail: String,
    /// Present exactly when the check failed.
    pub witness: Option<String>,
    pub elapsed: Duration,
}

type Outcome = (Status, String, Option<String>);

fn pass(detail: impl Into<String>) -> Outcome {
    (Status::Pass, detail.into(), None)
}

fn fail(detail: impl Into<String>, witness: impl Into<String>) -> Outcome {
    (Status::Fail, detail.into(), Some(witness.into()))
}

fn skip(reason: impl Into<String>) -> Outcome {
    (Status::Skipped, reason.into(), None)
}

/// Runs `f` and records its outcome and wall time under `name`.
pub fn timed(name: &'static str, f: impl FnOnce() -> (Status, String, Option<String>)) -> Check {
    let start = Instant::now();
    let (status, detail, witness) = f();
    Check {
        name,
        status,
        detail,
        witness,
        elapsed: start.elapsed(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Bound on enumerated group sizes.
    pub size_bound: usize,
    /// Identities are checked on every element when the off-diagonal
    /// blocks have at most this many elements in total, and on generators
    /// otherwise.
    pub exhaustive_limit: u128,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            size_bound: DEFAULT_SIZE_BOUND,
            exhaustive_limit: 32,
        }
    }
}

fn off_diagonal_size(r: &PeirceRing) -> u128 {
    let l = r.rank();
    (0..l)
        .flat_map(|i| (0..l).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| r.block(i, j).order())
        .sum()
}

fn sample_for(r: &PeirceRing, opts: &SuiteOptions) -> Sample {
    if off_diagonal_size(r) <= opts.exhaustive_limit {
        Sample::Exhaustive
    } else {
        Sample::Generators
    }
}

fn sample_name(s: Sample) -> &'static str {
    match s {
        Sample::Exhaustive => "all elements",
        Sample::Generators => "generators",
    }
}

/// For a ring with local units summing to an identity, the idempotent,
/// firm and reduced predicates agree with each other and with fullness of
/// every local unit.
pub fn predicate_equivalence(r: &PeirceRing) -> Outcome {
    let Some(units) = local_units(r) else {
        return skip("some corner ring has no identity");
    };
    let flat = r.flat();
    let mut one = flat.zero();
    for e in &units {
        one = flat.add(&one, e);
    }
    if FinRing::new(flat.mult().clone(), Some(one)).is_err() {
        return skip("the local units do not sum to an identity");
    }
    let rep = check_predicates(r);
    let full = fullness(flat, &units);
    let values = [rep.is_idempotent(), rep.is_firm(), rep.is_reduced(), full.is_ok()];
    let detail = format!(
        "idempotent={} firm={} reduced={} full={}",
        values[0], values[1], values[2], values[3]
    );
    if values.iter().all(|&v| v == values[0]) {
        pass(detail)
    } else {
        let witness = match (&rep.idempotent, &rep.firm, &rep.reduced, full) {
            (Err(w), _, _, _) => format!("{w:?}"),
            (_, Err(w), _, _) => format!("{w:?}"),
            (_, _, Err(w), _) => format!("{w:?}"),
            (_, _, _, Err(i)) => format!("local unit {i} is not full"),
            _ => unreachable!("some value differs"),
        };
        fail(detail, witness)
    }
}

/// Merging the last two indices preserves firmness and idempotence.
pub fn collapse_preserves(r: &PeirceRing) -> Outcome {
    if r.rank() < 2 {
        return skip("rank >= 2 required");
    }
    let c = match collapse_rank(r) {
        Ok(c) => c,
        Err(e) => return fail("collapse", e.to_string()),
    };
    let (before, after) = (check_predicates(r), check_predicates(&c));
    let detail = format!(
        "firm {} -> {}, idempotent {} -> {}",
        before.is_firm(),
        after.is_firm(),
        before.is_idempotent(),
        after.is_idempotent()
    );
    if before.is_firm() && !after.is_firm() {
        return fail(detail, format!("{:?}", after.firm));
    }
    if before.is_idempotent() && !after.is_idempotent() {
        return fail(detail, format!("{:?}", after.idempotent));
    }
    pass(detail)
}

/// Reads the ring as a Morita context over its last corner and rebuilds
/// it with `morita_ring`, whose output must be firm.
pub fn morita_context(r: &PeirceRing) -> Outcome {
    let l = r.rank();
    if l < 2 {
        return skip("rank >= 2 required");
    }
    let c = match regroup(r, &[(0..l - 1).collect(), vec![l - 1]]) {
        Ok(c) => c,
        Err(e) => return fail("regroup", e.to_string()),
    };
    let corner = c.corner(1);
    match morita_ring(&corner, c.mult(0, 1, 1), c.mult(1, 1, 0), c.mult(1, 0, 1)) {
        Err(e) => skip(format!("not a firm Morita context: {e}")),
        Ok(m) => {
            let rep = check_predicates(&m);
            let detail = format!("context over corner {l}, |S| = {}", m.block(0, 0).order());
            match rep.firm {
                Ok(()) => pass(detail),
                Err(w) => fail(detail, format!("{w:?}")),
            }
        }
    }
}

/// `R ⊗_R R` is firm, maps isomorphically onto a firm `R`, and the
/// quotient by the annihilator is reduced.
pub fn universal_ring_check(r: &PeirceRing) -> Outcome {
    let rep = check_predicates(r);
    if !rep.is_idempotent() {
        return skip("the decomposition is not idempotent");
    }
    let u = match universal_ring(r) {
        Ok(u) => u,
        Err(e) => return fail("universal ring", e.to_string()),
    };
    if let Err(w) = is_firm_report(&u.ring) {
        return fail("universal ring is firm", w);
    }
    let iso = u.canonical.is_isomorphism();
    if rep.is_firm() && !iso {
        return fail(
            "canonical map of a firm ring is bijective",
            format!("bijective blocks {:?}", u.canonical.bijective_blocks()),
        );
    }
    let q = match reduced_quotient(r) {
        Ok(q) => q,
        Err(e) => return fail("reduced quotient", e.to_string()),
    };
    if let Err(w) = check_predicates(&q.ring).reduced {
        return fail("reduced quotient is reduced", format!("{w:?}"));
    }
    pass(format!(
        "|universal| = {}, canonical isomorphism = {iso}, |reduced quotient| = {}",
        u.ring.order(),
        q.ring.order()
    ))
}

fn is_firm_report(r: &PeirceRing) -> Result<(), String> {
    check_predicates(r).firm.map_err(|w| format!("{w:?}"))
}

pub fn steinberg(r: &PeirceRing, opts: &SuiteOptions) -> Outcome {
    let sample = sample_for(r, opts);
    let rep = verify_steinberg(r, sample);
    let parts = [
        ("additivity", &rep.additivity),
        ("commuting", &rep.commuting),
        ("commutator", &rep.commutator),
        ("left", &rep.left),
        ("right", &rep.right),
        ("hall-witt", &rep.hall_witt),
    ];
    let detail = format!(
        "{}: {}",
        sample_name(sample),
        parts.iter().map(|(n, c)| format!("{n} {}", c.checked)).collect::<Vec<_>>().join(", ")
    );
    match parts.iter().find_map(|(n, c)| c.failure.as_ref().map(|f| (n, f))) {
        None => pass(detail),
        Some((n, f)) => fail(detail, format!("{n}: {f:?}")),
    }
}

/// Every transvection acts by a ring automorphism, compatibly with `∘`.
pub fn action_automorphism(r: &PeirceRing, opts: &SuiteOptions) -> Outcome {
    let sample = sample_for(r, opts);
    let l = r.rank();
    let mut units: Vec<QuasiUnit> = Vec::new();
    for i in 0..l {
        for j in (0..l).filter(|&j| j != i) {
            let b: &FinAbGroup = r.block(i, j);
            let elems: Vec<_> = match sample {
                Sample::Exhaustive => b.elements().collect(),
                Sample::Generators => b.generators(),
            };
            for a in elems {
                match transvection(r, i, j, &a) {
                    Ok(t) => units.push(t),
                    Err(e) => return fail("transvection", e.to_string()),
                }
            }
        }
    }
    match verify_action(r.flat(), &units) {
        Ok(n) => pass(format!("{} transvections on {}, {n} instances", units.len(), sample_name(sample))),
        Err(w) => fail(format!("{} transvections", units.len()), format!("units {}, {} at generator {}", w.0, w.1, w.2)),
    }
}

pub fn center_perfectness(r: &PeirceRing, opts: &SuiteOptions) -> Outcome {
    if r.rank() < 3 {
        return skip("rank >= 3 required");
    }
    if !check_predicates(r).is_idempotent() {
        return skip("the decomposition is not idempotent");
    }
    match perfectness_and_center(r, opts.size_bound) {
        Err(QuasiError::BoundExceeded { .. }) => skip(format!("upper triangular group exceeds {} elements", opts.size_bound)),
        Err(e) => fail("perfectness witnesses", e.to_string()),
        Ok(rep) => {
            let detail = format!(
                "{} perfectness witnesses, {} upper triangular elements, {} central",
                rep.perfectness.len(),
                rep.upper_triangular,
                rep.central.len()
            );
            if rep.passed() {
                pass(detail)
            } else if let Some(c) = rep.act_collisions.first() {
                fail(detail, format!("equal action: {c:?}"))
            } else {
                fail(detail, format!("central elements {:?}", rep.central))
            }
        }
    }
}

/// The extracted relations are K-linear and inherit each predicate of the
/// ring.
pub fn extracted_relations(r: &PeirceRing) -> Outcome {
    let d = extract(r);
    if let Err(root) = check_k_linear(&d) {
        return fail("K-linearity", format!("{root:?}"));
    }
    let rep = check_predicates(r);
    let pairs = [
        ("idempotent", rep.is_idempotent(), check_idempotent_rel(&d)),
        ("firm", rep.is_firm(), check_firm_rel(&d)),
        ("reduced", rep.is_reduced(), check_reduced_rel(&d)),
    ];
    let detail = pairs
        .iter()
        .map(|(n, ring, rel)| format!("{n} {ring} -> {}", rel.is_ok()))
        .collect::<Vec<_>>()
        .join(", ");
    for (n, ring, rel) in &pairs {
        if let (true, Err(w)) = (ring, rel) {
            return fail(detail, format!("{n}: {w:?}"));
        }
    }
    pass(detail)
}

pub fn associativity_patterns(r: &PeirceRing) -> Outcome {
    if r.rank() < 4 {
        return skip("rank >= 4 required");
    }
    match verify_lemma_ass(r) {
        Err(e) => fail("pattern checks", e.to_string()),
        Ok(rep) => {
            let checked: usize = rep.patterns.iter().map(|p| p.checked).sum();
            let detail = format!("{} patterns, {checked} instances, hypotheses hold = {}", rep.patterns.len(), rep.hypotheses_hold());
            match rep.patterns.iter().find(|p| p.failure.is_some()) {
                None if rep.derived_follow() => pass(detail),
                None => fail(detail, format!("surjectivity {:?}", rep.surjectivity_failure)),
                Some(p) => fail(detail, format!("pattern {:?}: {:?}", p.pattern, p.failure)),
            }
        }
    }
}

fn reconstruction(r: &PeirceRing, firm: bool) -> Outcome {
    if r.rank() < 4 {
        return skip("rank >= 4 required");
    }
    let d = extract(r);
    let (rel, build): (_, fn(&_) -> Result<CoordinatizationResult, CoordError>) = if firm {
        (check_firm_rel(&d), |d| firm_coordinatize(d, FirmOptions::default()))
    } else {
        (check_reduced_rel(&d), reduced_coordinatize)
    };
    if let Err(w) = rel {
        return skip(format!("relations do not satisfy the predicate: {w:?}"));
    }
    let out = match build(&d) {
        Ok(o) => o,
        Err(e) => return fail("construction", e.to_string()),
    };
    let certs = if firm { out.r_cons.len() } else { out.r_gen.len() };
    if !out.certified() {
        return fail(
            "certificates",
            format!("r_cons {:?}, r_gen {:?}, predicates {:?}", out.r_cons, out.r_gen, out.predicates),
        );
    }
    match connecting_hom(&d, &out.ring, r) {
        Err(e) => fail("connecting homomorphism", e.to_string()),
        Ok(c) if c.isomorphism => pass(format!("{certs} certificates, isomorphic to the input")),
        Ok(c) => fail("connecting homomorphism is bijective", format!("bijective blocks {:?}", c.bijective)),
    }
}

pub fn firm_reconstruction(r: &PeirceRing) -> Outcome {
    reconstruction(r, true)
}

pub fn reduced_reconstruction(r: &PeirceRing) -> Outcome {
    reconstruction(r, false)
}

/// All checks in a fixed order.
pub fn verify_lemmas(r: &PeirceRing, opts: &SuiteOptions) -> Vec<Check> {
    vec![
        timed("predicate-equivalence", || predicate_equivalence(r)),
        timed("collapse-preserves-predicates", || collapse_preserves(r)),
        timed("morita-context-firm", || morita_context(r)),
        timed("universal-ring", || universal_ring_check(r)),
        timed("steinberg-relations", || steinberg(r, opts)),
        timed("action-automorphism", || action_automorphism(r, opts)),
        timed("center-perfectness", || center_perfectness(r, opts)),
        timed("extracted-relations", || extracted_relations(r)),
        timed("associativity-patterns", || associativity_patterns(r)),
        timed("firm-reconstruction", || firm_reconstruction(r)),
        timed("reduced-reconstruction", || reduced_reconstruction(r)),
    ]
}
