//! The standard set of small example rings used by the test suites and by
//! the command-line `--seed-corpus` option.

use crate::exact_linalg::{Bilinear, FinAbGroup};
use crate::peirce::{grouped_mat_ring, mat_ring, morita_ring, peirce_from_idempotents, FinRing, PeirceError, PeirceRing};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    /// File-name friendly identifier, e.g. `mat-4-z2`.
    pub name: String,
    pub ring: PeirceRing,
}

/// `(S P; Q R)` for `R = Z/n`, `P` the row vectors `(Z/n)^k`, `Q` the
/// column vectors and the dot product as pairing. Isomorphic to
/// `Mat(k + 1, Z/n)` grouped as `{1..k} | {k+1}`.
pub fn vector_morita_ring(k: usize, n: i64) -> Result<PeirceRing, PeirceError> {
    if n < 2 {
        return Err(PeirceError::InvalidModulus(n));
    }
    let r = FinRing::cyclic(n);
    let v = FinAbGroup::free_module(n, k);
    let z = r.additive().clone();
    let p = Bilinear::from_fn(&v, &z, &v, |a, _| v.generator(a))?;
    let q = Bilinear::from_fn(&z, &v, &v, |_, b| v.generator(b))?;
    let dot = Bilinear::from_fn(&v, &v, &z, |a, b| vec![i64::from(a == b)])?;
    morita_ring(&r, &p, &q, &dot)
}

/// `Mat(ℓ, A)` for the ring `A` on `Z/n` with zero multiplication.
pub fn null_mat_ring(rank: usize, n: i64) -> Result<PeirceRing, PeirceError> {
    let g = FinAbGroup::cyclic(n);
    mat_ring(rank, &FinRing::new_unchecked(Bilinear::zero(&g, &g, &g), None)?)
}

/// `Z/n × Z/n` decomposed by its two coordinate idempotents.
pub fn product_ring(n: i64) -> Result<PeirceRing, PeirceError> {
    let m = FinRing::product(&[FinRing::cyclic(n), FinRing::cyclic(n)]);
    peirce_from_idempotents(&m, &[vec![1, 0], vec![0, 1]])
}

/// Matrix rings over `Z/2`, `Z/3`, `Z/4` of ranks 1 to 4, grouped
/// decompositions of matrix rings, one Morita ring, and two rings whose
/// decompositions are not idempotent.
pub fn standard_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut push = |name: String, ring: Result<PeirceRing, PeirceError>| {
        out.push(CorpusEntry {
            name,
            ring: ring.expect("corpus ring"),
        })
    };
    for n in [2, 3, 4] {
        for l in 1..=4 {
            push(format!("mat-{l}-z{n}"), mat_ring(l, &FinRing::cyclic(n)));
        }
    }
    push("grouped-5-z2-1.2.3.45".into(), grouped_mat_ring(5, 2, &[vec![0], vec![1], vec![2], vec![3, 4]]));
    push("grouped-3-z2-1.23".into(), grouped_mat_ring(3, 2, &[vec![0], vec![1, 2]]));
    push("grouped-4-z3-12.34".into(), grouped_mat_ring(4, 3, &[vec![0, 1], vec![2, 3]]));
    push("morita-2-z2".into(), vector_morita_ring(2, 2));
    push("product-z2".into(), product_ring(2));
    push("null-mat-2-z2".into(), null_mat_ring(2, 2));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peirce::{check_predicates, regroup};

    #[test]
    fn corpus_names_are_unique() {
        let c = standard_corpus();
        let mut names: Vec<&str> = c.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), c.len());
        assert_eq!(c.len(), 18);
    }

    #[test]
    fn morita_example_has_matrix_shape() {
        let m = vector_morita_ring(2, 3).unwrap();
        let g = regroup(&mat_ring(3, &FinRing::cyclic(3)).unwrap(), &[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(m.block_orders(), g.block_orders());
        assert!(check_predicates(&m).is_firm());
    }

    #[test]
    fn degenerate_entries_are_not_idempotent() {
        assert!(!check_predicates(&product_ring(2).unwrap()).is_idempotent());
        let z = null_mat_ring(2, 2).unwrap();
        assert_eq!(z.order(), 16);
        assert!(!check_predicates(&z).is_idempotent());
    }
}
