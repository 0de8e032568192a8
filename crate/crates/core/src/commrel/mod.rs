//! Commutator relations of type `A_{ℓ-1}`: root modules `U_ij` with
//! brackets `c_ijk: U_ij × U_jk -> U_ik`, and the idempotent, firm,
//! reduced and `K`-linear conditions on them.
//!
//! Indices are 0-based; the text format in [`format`] uses 1-based indices.

pub mod format;

use crate::exact_linalg::{subgroup_equal, tensor_z, AbHom, Bilinear, Elem, FinAbGroup, LinalgError, Subgroup};
use crate::peirce::PeirceRing;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CommRelError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(i64),
    #[error("c(c(x, y), z) != c(x, c(y, z)) for roots {indices:?} on generators {generators:?}")]
    NotAssociative {
        indices: (usize, usize, usize, usize),
        generators: (usize, usize, usize),
    },
}

/// The root `e_i - e_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize) -> Option<Self> {
        (i != j).then_some(Self { i, j })
    }

    pub fn neg(self) -> Self {
        Self { i: self.j, j: self.i }
    }

    /// `self + other` when it is a root.
    pub fn add(self, other: Root) -> Option<Root> {
        if self.j == other.i && self.i != other.j {
            Some(Root { i: self.i, j: other.j })
        } else if other.j == self.i && other.i != self.j {
            Some(Root { i: other.i, j: self.j })
        } else {
            None
        }
    }

    /// Coordinates in `Z^rank`.
    pub fn vector(self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        v[self.i] += 1;
        v[self.j] -= 1;
        v
    }

    pub fn all(rank: usize) -> Vec<Root> {
        (0..rank)
            .flat_map(|i| (0..rank).filter_map(move |j| Root::new(i, j)))
            .collect()
    }
}

fn distinct(ix: &[usize]) -> bool {
    ix.iter().enumerate().all(|(a, x)| ix[a + 1..].iter().all(|y| x != y))
}

/// Ordered triples of distinct indices, i.e. the `A_2` basis pairs
/// `(e_i - e_j, e_j - e_k)`.
pub fn a2_triples(rank: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..rank {
        for j in 0..rank {
            for k in 0..rank {
                if distinct(&[i, j, k]) {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// Ordered quadruples of distinct indices, i.e. the `A_3` bases.
pub fn a3_quadruples(rank: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for (i, j, k) in a2_triples(rank) {
        for l in 0..rank {
            if distinct(&[i, j, k, l]) {
                out.push((i, j, k, l));
            }
        }
    }
    out
}

/// Root modules `U_ij` (`i ≠ j`) over `K = Z/n` and brackets
/// `c_ijk: U_ij × U_jk -> U_ik` for distinct `i, j, k`. Diagonal modules
/// are stored as the trivial group and never used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommRelData {
    modulus: i64,
    modules: Vec<Vec<FinAbGroup>>,
    maps: BTreeMap<(usize, usize, usize), Bilinear>,
}

type Witness = ((usize, usize, usize, usize), (usize, usize, usize));

impl CommRelData {
    /// Validates shapes and `c(c(x, y), z) = c(x, c(y, z))` on generators
    /// of every `A_3` basis.
    pub fn new(
        modulus: i64,
        modules: Vec<Vec<FinAbGroup>>,
        maps: BTreeMap<(usize, usize, usize), Bilinear>,
    ) -> Result<Self, CommRelError> {
        let d = Self::new_unchecked(modulus, modules, maps)?;
        if let Some((indices, generators)) = d.associativity_failure() {
            return Err(CommRelError::NotAssociative { indices, generators });
        }
        Ok(d)
    }

    /// Like [`CommRelData::new`] without the associativity check.
    pub fn new_unchecked(
        modulus: i64,
        mut modules: Vec<Vec<FinAbGroup>>,
        maps: BTreeMap<(usize, usize, usize), Bilinear>,
    ) -> Result<Self, CommRelError> {
        if modulus < 2 {
            return Err(CommRelError::InvalidModulus(modulus));
        }
        let l = modules.len();
        if l == 0 || modules.iter().any(|r| r.len() != l) {
            return Err(CommRelError::Shape("modules must form a nonempty square array".into()));
        }
        for (i, row) in modules.iter_mut().enumerate() {
            row[i] = FinAbGroup::zero();
        }
        let expected = a2_triples(l);
        if maps.len() != expected.len() || expected.iter().any(|t| !maps.contains_key(t)) {
            return Err(CommRelError::Shape("need one bracket per triple of distinct indices".into()));
        }
        for (&(i, j, k), m) in &maps {
            if m.left() != &modules[i][j] || m.right() != &modules[j][k] || m.target() != &modules[i][k] {
                return Err(CommRelError::Shape(format!(
                    "bracket ({i},{j},{k}) has the wrong domain or target"
                )));
            }
        }
        Ok(Self { modulus, modules, maps })
    }

    pub fn rank(&self) -> usize {
        self.modules.len()
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    /// `U_ij`, trivial for `i = j`.
    pub fn module(&self, i: usize, j: usize) -> &FinAbGroup {
        &self.modules[i][j]
    }

    pub fn root_module(&self, a: Root) -> &FinAbGroup {
        &self.modules[a.i][a.j]
    }

    /// `c_ijk`; panics unless the indices are distinct.
    pub fn cmap(&self, i: usize, j: usize, k: usize) -> &Bilinear {
        &self.maps[&(i, j, k)]
    }

    pub fn maps(&self) -> &BTreeMap<(usize, usize, usize), Bilinear> {
        &self.maps
    }

    /// First failure of `c(c(x, y), z) = c(x, c(y, z))` in lexicographic
    /// order of the quadruple, on generators.
    pub fn associativity_failure(&self) -> Option<Witness> {
        for (i, j, k, l) in a3_quadruples(self.rank()) {
            let (cijk, cikl, cjkl, cijl) = (
                self.cmap(i, j, k),
                self.cmap(i, k, l),
                self.cmap(j, k, l),
                self.cmap(i, j, l),
            );
            let xs = self.modules[i][j].generators();
            let zs = self.modules[k][l].generators();
            for (a, x) in xs.iter().enumerate() {
                for b in 0..self.modules[j][k].rank() {
                    for (c, z) in zs.iter().enumerate() {
                        let lhs = cikl.apply(cijk.entry(a, b), z);
                        let rhs = cijl.apply(x, cjkl.entry(b, c));
                        if lhs != rhs {
                            return Some(((i, j, k, l), (a, b, c)));
                        }
                    }
                }
            }
        }
        None
    }

    /// A copy with one bracket replaced, skipping validation.
    pub fn with_map_unchecked(&self, key: (usize, usize, usize), map: Bilinear) -> Result<Self, CommRelError> {
        let mut maps = self.maps.clone();
        maps.insert(key, map);
        Self::new_unchecked(self.modulus, self.modules.clone(), maps)
    }
}

/// The commutator relations of the elementary transvections of a Peirce
/// ring: `U_ij = R_ij` and `c_ijk = m_ijk`.
pub fn extract(r: &PeirceRing) -> CommRelData {
    let l = r.rank();
    let modules = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| if i == j { FinAbGroup::zero() } else { r.block(i, j).clone() })
                .collect()
        })
        .collect();
    let maps = a2_triples(l)
        .into_iter()
        .map(|(i, j, k)| ((i, j, k), r.mult(i, j, k).clone()))
        .collect();
    CommRelData::new_unchecked(r.modulus(), modules, maps).expect("blocks of a Peirce ring have consistent shapes")
}

/// Why a relations predicate fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelFailure {
    /// `c_ijk(U_ij, U_jk)` does not generate `U_ik`.
    NotIdempotent { triple: (usize, usize, usize) },
    /// For the `A_3` basis on `quadruple`, `element` of
    /// `(U_ij ⊗ U_jl) ⊕ (U_ik ⊗ U_kl)` lies in the kernel but not in the
    /// image (`in_kernel`), or the other way around.
    NotFirm {
        quadruple: (usize, usize, usize, usize),
        element: Elem,
        in_kernel: bool,
    },
    /// A nonzero `element` of `U_root` commutes with the other roots of the
    /// subsystem spanned by `root` and `third`.
    NotReduced { root: Root, third: usize, element: Elem },
}

/// Subgroup of `U_ik` generated by `c_ijk` on generator pairs.
pub fn bracket_span(d: &CommRelData, i: usize, j: usize, k: usize) -> Subgroup {
    let m = d.cmap(i, j, k);
    let gens = m.table().iter().flatten().cloned().collect();
    Subgroup::new(m.target(), gens).expect("bracket values lie in the target")
}

pub fn check_idempotent_rel(d: &CommRelData) -> Result<(), RelFailure> {
    for triple @ (i, j, k) in a2_triples(d.rank()) {
        if !bracket_span(d, i, j, k).is_whole() {
            return Err(RelFailure::NotIdempotent { triple });
        }
    }
    Ok(())
}

/// The two subgroups compared by the firmness condition for the `A_3`
/// basis `(e_i - e_j, e_j - e_k, e_k - e_l)`: the kernel of
/// `(c c): (U_ij ⊗ U_jl) ⊕ (U_ik ⊗ U_kl) -> U_il` and the image of
/// `(1⊗c  c⊗1; -c⊗1  -1⊗c)` on
/// `(U_ij ⊗ U_jk ⊗ U_kl) ⊕ (U_ik ⊗ U_kj ⊗ U_jl)`.
pub fn firmness_subgroups(d: &CommRelData, i: usize, j: usize, k: usize, l: usize) -> (Subgroup, Subgroup) {
    let t1 = tensor_z(d.module(i, j), d.module(j, l));
    let t2 = tensor_z(d.module(i, k), d.module(k, l));
    let (sum, off) = FinAbGroup::direct_sum([t1.group(), t2.group()]);
    let phi = AbHom::join(
        d.module(i, l),
        &[d.cmap(i, j, l).on_tensor(&t1), d.cmap(i, k, l).on_tensor(&t2)],
    )
    .expect("common target");
    let pair = |a: Elem, b: Elem| {
        let mut v = sum.zero_elem();
        v[off[0]..off[0] + a.len()].copy_from_slice(&a);
        v[off[1]..off[1] + b.len()].copy_from_slice(&b);
        v
    };
    let mut gens = Vec::new();
    for x in d.module(i, j).generators() {
        for y in d.module(j, k).generators() {
            let xy = d.cmap(i, j, k).apply(&x, &y);
            for z in d.module(k, l).generators() {
                let yz = d.cmap(j, k, l).apply(&y, &z);
                gens.push(pair(t1.pure(&x, &yz), t2.group().neg(&t2.pure(&xy, &z))));
            }
        }
    }
    for x in d.module(i, k).generators() {
        for y in d.module(k, j).generators() {
            let xy = d.cmap(i, k, j).apply(&x, &y);
            for z in d.module(j, l).generators() {
                let yz = d.cmap(k, j, l).apply(&y, &z);
                gens.push(pair(t1.pure(&xy, &z), t2.group().neg(&t2.pure(&x, &yz))));
            }
        }
    }
    let image = Subgroup::new(&sum, gens).expect("elements of the sum");
    (phi.kernel(), image)
}

/// Firmness over `Z`. For `K = Z/n` the tensor products over `K` and over
/// `Z` of `K`-modules coincide, so this is also the `K`-tensor condition.
pub fn check_firm_rel(d: &CommRelData) -> Result<(), RelFailure> {
    check_idempotent_rel(d)?;
    for quadruple @ (i, j, k, l) in a3_quadruples(d.rank()) {
        let (kernel, image) = firmness_subgroups(d, i, j, k, l);
        if subgroup_equal(&kernel, &image) {
            continue;
        }
        let outside = |a: &Subgroup, b: &Subgroup| a.canonical_basis().into_iter().find(|x| !b.contains(x));
        let failure = match outside(&kernel, &image) {
            Some(element) => RelFailure::NotFirm { quadruple, element, in_kernel: true },
            None => RelFailure::NotFirm {
                quadruple,
                element: outside(&image, &kernel).expect("subgroups differ"),
                in_kernel: false,
            },
        };
        return Err(failure);
    }
    Ok(())
}

/// Elements of `U_ab` whose brackets with the other roots of the subsystem
/// on `{a, b, c}` all vanish: `c_abc(g, U_bc) = 0` and `c_cab(U_ca, g) = 0`.
pub fn centralizing_elements(d: &CommRelData, a: usize, b: usize, c: usize) -> Subgroup {
    let src = d.module(a, b);
    let mut maps = Vec::new();
    for h in d.module(b, c).generators() {
        maps.push(d.cmap(a, b, c).fix_right(&h));
    }
    for h in d.module(c, a).generators() {
        maps.push(d.cmap(c, a, b).fix_left(&h));
    }
    if maps.is_empty() {
        return Subgroup::whole(src);
    }
    AbHom::stack(src, &maps).expect("common source").kernel()
}

pub fn check_reduced_rel(d: &CommRelData) -> Result<(), RelFailure> {
    check_idempotent_rel(d)?;
    for (a, b, c) in a2_triples(d.rank()) {
        if let Some(element) = centralizing_elements(d, a, b, c).canonical_basis().into_iter().next() {
            return Err(RelFailure::NotReduced {
                root: Root { i: a, j: b },
                third: c,
                element,
            });
        }
    }
    Ok(())
}

/// Every root module is a `Z/n`-module; brackets are then automatically
/// `Z/n`-bilinear since they are biadditive. Returns the first offending
/// root.
pub fn check_k_linear(d: &CommRelData) -> Result<(), Root> {
    for a in Root::all(d.rank()) {
        if d.modulus % d.root_module(a).exponent() != 0 {
            return Err(a);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peirce::{grouped_mat_ring, mat_ring, FinRing, PeirceRing};

    fn mat(l: usize, n: i64) -> CommRelData {
        extract(&mat_ring(l, &FinRing::cyclic(n)).unwrap())
    }

    #[test]
    fn root_sums_match_vectors() {
        for l in 2..=6 {
            let roots = Root::all(l);
            assert_eq!(roots.len(), l * (l - 1));
            for &a in &roots {
                assert_eq!(a.neg().vector(l), a.vector(l).iter().map(|x| -x).collect::<Vec<_>>());
                for &b in &roots {
                    let v: Vec<i64> = a.vector(l).iter().zip(b.vector(l)).map(|(x, y)| x + y).collect();
                    let brute = roots.iter().find(|r| r.vector(l) == v).copied();
                    assert_eq!(a.add(b), brute, "{a:?} + {b:?}");
                }
            }
        }
    }

    #[test]
    fn basis_counts() {
        assert_eq!(a2_triples(4).len(), 24);
        assert_eq!(a3_quadruples(4).len(), 24);
        assert!(a3_quadruples(3).is_empty());
    }

    #[test]
    fn extract_mat4() {
        let d = mat(4, 2);
        assert_eq!(Root::all(4).iter().filter(|&&a| d.root_module(a).order() == 2).count(), 12);
        assert_eq!(d.maps().len(), 24);
        assert!(d.maps().values().all(|m| m.table() == [vec![vec![1]]]));
        assert!(d.associativity_failure().is_none());
        assert_eq!(check_k_linear(&d), Ok(()));
        assert_eq!(check_idempotent_rel(&d), Ok(()));
        assert_eq!(check_firm_rel(&d), Ok(()));
        assert_eq!(check_reduced_rel(&d), Ok(()));
    }

    #[test]
    fn zero_block_gives_zero_module_and_maps() {
        // lower triangular incidence ring: R_ij = Z/2 for i >= j, else 0
        let blocks = (0..4)
            .map(|i| (0..4).map(|j| if i >= j { FinAbGroup::cyclic(2) } else { FinAbGroup::zero() }).collect())
            .collect();
        let r = PeirceRing::from_fn(2, blocks, |i, j, k, _, _| if i >= j && j >= k { vec![1] } else { vec![] }).unwrap();
        let d = extract(&r);
        assert!(d.module(0, 1).is_trivial());
        let touching: Vec<_> = d
            .maps()
            .iter()
            .filter(|(&(a, b, c), _)| [(a, b), (b, c), (a, c)].contains(&(0, 1)))
            .collect();
        assert_eq!(touching.len(), 6);
        assert!(touching.iter().all(|(_, m)| m.is_zero()));
        assert!(matches!(check_idempotent_rel(&d), Err(RelFailure::NotIdempotent { .. })));
    }

    #[test]
    fn grouped_mat5_has_mixed_modules() {
        let r = grouped_mat_ring(5, 2, &[vec![0], vec![1], vec![2], vec![3, 4]]).unwrap();
        let d = extract(&r);
        assert_eq!(d.module(0, 1).order(), 2);
        assert_eq!(d.module(0, 3).order(), 4);
        assert_eq!(d.module(3, 0).order(), 4);
        assert_eq!(check_firm_rel(&d), Ok(()));
        assert_eq!(check_reduced_rel(&d), Ok(()));
    }

    #[test]
    fn zeroed_bracket_breaks_idempotence() {
        let d = mat(4, 2);
        let z = FinAbGroup::cyclic(2);
        let bad = d.with_map_unchecked((0, 1, 2), Bilinear::zero(&z, &z, &z)).unwrap();
        assert_eq!(
            check_idempotent_rel(&bad),
            Err(RelFailure::NotIdempotent { triple: (0, 1, 2) })
        );
        assert!(bad.associativity_failure().is_some());
        assert!(CommRelData::new(2, bad.modules.clone(), bad.maps.clone()).is_err());
    }

    #[test]
    fn null_summand_breaks_reducedness() {
        // rank 3, so associativity is vacuous; the second summand of U_01
        // is a bracket value but brackets to zero with U_12 and U_20
        let g = |o: &[i64]| FinAbGroup::new(o).unwrap();
        let mut modules = vec![vec![FinAbGroup::zero(); 3]; 3];
        modules[0][1] = g(&[2, 2]);
        modules[0][2] = g(&[2, 2]);
        modules[1][2] = g(&[2, 2]);
        modules[1][0] = g(&[2]);
        modules[2][0] = g(&[2]);
        modules[2][1] = g(&[2]);
        let unit = |n: usize, a: usize| {
            let mut v = vec![0; n];
            v[a] = 1;
            v
        };
        let rule = |(i, j, k): (usize, usize, usize), a: usize, b: usize| -> Elem {
            match (i, j, k) {
                (0, 1, 2) if a == 0 => unit(2, b),
                (0, 1, 2) => vec![0, 0],
                (0, 2, 1) => unit(2, a),
                (1, 0, 2) => unit(2, b),
                (1, 2, 0) => vec![i64::from(a == 0)],
                (2, 0, 1) => vec![i64::from(b == 0)],
                _ => vec![1],
            }
        };
        let maps = a2_triples(3)
            .into_iter()
            .map(|t @ (i, j, k)| {
                let m = Bilinear::from_fn(&modules[i][j], &modules[j][k], &modules[i][k], |a, b| rule(t, a, b));
                (t, m.unwrap())
            })
            .collect();
        let d = CommRelData::new(2, modules, maps).unwrap();
        assert_eq!(check_idempotent_rel(&d), Ok(()));
        assert_eq!(
            check_reduced_rel(&d),
            Err(RelFailure::NotReduced {
                root: Root { i: 0, j: 1 },
                third: 2,
                element: vec![0, 1]
            })
        );
    }

    #[test]
    fn firmness_matrix_over_z3() {
        let d = mat(4, 3);
        let (kernel, image) = firmness_subgroups(&d, 0, 1, 2, 3);
        assert_eq!(kernel.order(), 3);
        assert!(subgroup_equal(&kernel, &image));
        assert_eq!(check_firm_rel(&d), Ok(()));
    }

    #[test]
    fn k_linearity() {
        let d = mat(4, 4);
        let mut modules = d.modules.clone();
        for row in modules.iter_mut() {
            for m in row.iter_mut() {
                if !m.is_trivial() {
                    *m = FinAbGroup::cyclic(2);
                }
            }
        }
        let maps = d
            .maps
            .keys()
            .map(|&(a, b, c)| ((a, b, c), Bilinear::from_fn(&modules[a][b], &modules[b][c], &modules[a][c], |_, _| vec![1]).unwrap()))
            .collect();
        let two_in_four = CommRelData::new(4, modules.clone(), maps).unwrap();
        assert_eq!(check_k_linear(&two_in_four), Ok(()));
        let four = mat(4, 4);
        let four_in_two = CommRelData::new(2, four.modules.clone(), four.maps.clone()).unwrap();
        assert_eq!(check_k_linear(&four_in_two), Err(Root { i: 0, j: 1 }));
    }
}
