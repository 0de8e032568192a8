use super::{FinRing, PeirceError};
use crate::exact_linalg::{Bilinear, Elem, FinAbGroup};

/// A ring `R = ⊕ R_ij` of rank `ℓ` over `Z/n`, with block multiplications
/// `m_ijk: R_ij × R_jk -> R_ik`. Products of blocks with mismatched inner
/// indices are zero by construction.
///
/// Elements of the whole ring are flat vectors: the blocks concatenated in
/// row-major order of `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeirceRing {
    modulus: i64,
    blocks: Vec<Vec<FinAbGroup>>,
    mult: Vec<Vec<Vec<Bilinear>>>,
    offsets: Vec<Vec<usize>>,
    flat: FinRing,
}

type Witness = ((usize, usize, usize, usize), (usize, usize, usize));

impl PeirceRing {
    /// Validates shapes, that every block is a `Z/n`-module, and
    /// associativity on all generator triples.
    pub fn new(
        modulus: i64,
        blocks: Vec<Vec<FinAbGroup>>,
        mult: Vec<Vec<Vec<Bilinear>>>,
    ) -> Result<Self, PeirceError> {
        let ring = Self::new_unchecked(modulus, blocks, mult)?;
        if let Some((indices, generators)) = ring.associativity_failure() {
            return Err(PeirceError::NotAssociative {
                indices: Some(indices),
                generators,
            });
        }
        Ok(ring)
    }

    /// Like [`PeirceRing::new`] but without the associativity check.
    pub fn new_unchecked(
        modulus: i64,
        blocks: Vec<Vec<FinAbGroup>>,
        mult: Vec<Vec<Vec<Bilinear>>>,
    ) -> Result<Self, PeirceError> {
        if modulus < 2 {
            return Err(PeirceError::InvalidModulus(modulus));
        }
        let l = blocks.len();
        if l == 0 {
            return Err(PeirceError::RankTooSmall { rank: 0, required: 1 });
        }
        if blocks.iter().any(|row| row.len() != l) {
            return Err(PeirceError::Shape("blocks must form a square array".into()));
        }
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                let e = b.exponent();
                if modulus % e != 0 {
                    return Err(PeirceError::NotKModule {
                        i,
                        j,
                        exponent: e,
                        modulus,
                    });
                }
            }
        }
        if mult.len() != l || mult.iter().any(|m| m.len() != l || m.iter().any(|r| r.len() != l)) {
            return Err(PeirceError::Shape("need one multiplication per index triple".into()));
        }
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    let m = &mult[i][j][k];
                    if m.left() != &blocks[i][j] || m.right() != &blocks[j][k] || m.target() != &blocks[i][k] {
                        return Err(PeirceError::Shape(format!(
                            "multiplication ({i},{j},{k}) has the wrong domain or target"
                        )));
                    }
                }
            }
        }
        let (total, starts) = FinAbGroup::direct_sum(blocks.iter().flatten());
        let offsets: Vec<Vec<usize>> = (0..l).map(|i| starts[i * l..(i + 1) * l].to_vec()).collect();
        let mut owner = Vec::with_capacity(total.rank());
        for i in 0..l {
            for j in 0..l {
                for a in 0..blocks[i][j].rank() {
                    owner.push((i, j, a));
                }
            }
        }
        let flat_mult = Bilinear::from_fn(&total, &total, &total, |x, y| {
            let (i, j, a) = owner[x];
            let (k, m, b) = owner[y];
            let mut v = vec![0; total.rank()];
            if j == k {
                let p = mult[i][j][m].entry(a, b);
                let o = offsets[i][m];
                v[o..o + p.len()].copy_from_slice(p);
            }
            v
        })?;
        let flat = FinRing::new_unchecked(flat_mult, None)?;
        Ok(Self {
            modulus,
            blocks,
            mult,
            offsets,
            flat,
        })
    }

    /// Builds the ring from a formula for `m_ijk` on generator pairs.
    pub fn from_fn(
        modulus: i64,
        blocks: Vec<Vec<FinAbGroup>>,
        mut f: impl FnMut(usize, usize, usize, usize, usize) -> Elem,
    ) -> Result<Self, PeirceError> {
        let l = blocks.len();
        let mut mult = Vec::with_capacity(l);
        for i in 0..l {
            let mut mi = Vec::with_capacity(l);
            for j in 0..l {
                let mut mij = Vec::with_capacity(l);
                for k in 0..l {
                    mij.push(Bilinear::from_fn(&blocks[i][j], &blocks[j][k], &blocks[i][k], |a, b| {
                        f(i, j, k, a, b)
                    })?);
                }
                mi.push(mij);
            }
            mult.push(mi);
        }
        Self::new(modulus, blocks, mult)
    }

    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn block(&self, i: usize, j: usize) -> &FinAbGroup {
        &self.blocks[i][j]
    }

    pub fn blocks(&self) -> &[Vec<FinAbGroup>] {
        &self.blocks
    }

    /// `m_ijk`.
    pub fn mult(&self, i: usize, j: usize, k: usize) -> &Bilinear {
        &self.mult[i][j][k]
    }

    pub fn mults(&self) -> &[Vec<Vec<Bilinear>>] {
        &self.mult
    }

    /// The underlying ring with generators numbered across all blocks.
    pub fn flat(&self) -> &FinRing {
        &self.flat
    }

    pub fn additive(&self) -> &FinAbGroup {
        self.flat.additive()
    }

    pub fn order(&self) -> u128 {
        self.flat.order()
    }

    pub fn offset(&self, i: usize, j: usize) -> usize {
        self.offsets[i][j]
    }

    /// The `(i, j)` component of a flat element.
    pub fn component(&self, x: &[i64], i: usize, j: usize) -> Elem {
        let o = self.offsets[i][j];
        x[o..o + self.blocks[i][j].rank()].to_vec()
    }

    /// The flat element with a single nonzero component `v` in `R_ij`.
    pub fn embed(&self, i: usize, j: usize, v: &[i64]) -> Elem {
        let mut x = self.flat.zero();
        let o = self.offsets[i][j];
        x[o..o + v.len()].copy_from_slice(v);
        x
    }

    /// Which block `(i, j)` the flat generator `g` belongs to, and its index
    /// there.
    pub fn locate(&self, g: usize) -> (usize, usize, usize) {
        let l = self.rank();
        for i in 0..l {
            for j in 0..l {
                let o = self.offsets[i][j];
                if g >= o && g < o + self.blocks[i][j].rank() {
                    return (i, j, g - o);
                }
            }
        }
        panic!("generator {g} out of range")
    }

    pub fn mul(&self, x: &[i64], y: &[i64]) -> Elem {
        self.flat.mul(x, y)
    }

    /// The corner ring `R_jj`.
    pub fn corner(&self, j: usize) -> FinRing {
        FinRing::new_unchecked(self.mult[j][j][j].clone(), None).expect("square multiplication")
    }

    /// First failure of `(xy)z = x(yz)` for generators `x ∈ R_ij`,
    /// `y ∈ R_jk`, `z ∈ R_kl`, in lexicographic order of `(i, j, k, l)`.
    pub fn associativity_failure(&self) -> Option<Witness> {
        let l = self.rank();
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    for m in 0..l {
                        if let Some(g) = self.pattern_failure(i, j, k, m) {
                            return Some(((i, j, k, m), g));
                        }
                    }
                }
            }
        }
        None
    }

    /// First generator triple violating associativity for the index
    /// pattern `(i, j, k, l)`.
    pub fn pattern_failure(&self, i: usize, j: usize, k: usize, l: usize) -> Option<(usize, usize, usize)> {
        let (bij, bjk, bkl) = (&self.blocks[i][j], &self.blocks[j][k], &self.blocks[k][l]);
        let zs = bkl.generators();
        for a in 0..bij.rank() {
            let x = bij.generator(a);
            for b in 0..bjk.rank() {
                let xy = self.mult[i][j][k].entry(a, b);
                for (c, z) in zs.iter().enumerate() {
                    let lhs = self.mult[i][k][l].apply(xy, z);
                    let yz = self.mult[j][k][l].entry(b, c);
                    let rhs = self.mult[i][j][l].apply(&x, yz);
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// A copy with one product-table entry replaced, skipping validation.
    /// Used to build corrupted inputs for negative tests.
    pub fn with_entry_unchecked(
        &self,
        (i, j, k): (usize, usize, usize),
        (a, b): (usize, usize),
        value: Elem,
    ) -> Result<Self, PeirceError> {
        let mut mult = self.mult.clone();
        let m = &mult[i][j][k];
        let mut table = m.table().to_vec();
        table[a][b] = value;
        mult[i][j][k] = Bilinear::new(m.left().clone(), m.right().clone(), m.target().clone(), table)?;
        Self::new_unchecked(self.modulus, self.blocks.clone(), mult)
    }

    /// Block orders as a matrix.
    pub fn block_orders(&self) -> Vec<Vec<u128>> {
        self.blocks.iter().map(|r| r.iter().map(|b| b.order()).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upper_triangular_z2() -> PeirceRing {
        let z2 = FinAbGroup::cyclic(2);
        let zero = FinAbGroup::zero();
        let blocks = vec![vec![z2.clone(), z2.clone()], vec![zero, z2.clone()]];
        PeirceRing::from_fn(2, blocks, |i, j, k, _, _| {
            if i <= j && j <= k {
                vec![1]
            } else {
                vec![]
            }
        })
        .unwrap()
    }

    #[test]
    fn flat_layout() {
        let r = upper_triangular_z2();
        assert_eq!(r.order(), 8);
        assert_eq!(r.offset(1, 1), 2);
        let e11 = r.embed(0, 0, &[1]);
        let e12 = r.embed(0, 1, &[1]);
        let e22 = r.embed(1, 1, &[1]);
        assert_eq!(r.mul(&e11, &e12), e12);
        assert_eq!(r.mul(&e12, &e22), e12);
        assert!(r.flat().is_zero(&r.mul(&e12, &e11)));
        assert_eq!(r.locate(2), (1, 1, 0));
        assert!(r.flat().associativity_failure().is_none());
    }

    #[test]
    fn corruption_is_caught() {
        let r = upper_triangular_z2();
        let bad = r.with_entry_unchecked((0, 0, 0), (0, 0), vec![0]).unwrap();
        let ((i, j, k, l), _) = bad.associativity_failure().unwrap();
        assert_eq!((i, j, k, l), (0, 0, 0, 1));
        assert!(PeirceRing::new(2, bad.blocks().to_vec(), bad.mults().to_vec()).is_err());
    }

    #[test]
    fn rejects_non_modules() {
        let z4 = FinAbGroup::cyclic(4);
        let err = PeirceRing::from_fn(2, vec![vec![z4]], |_, _, _, _, _| vec![0]).unwrap_err();
        assert!(matches!(err, PeirceError::NotKModule { exponent: 4, .. }));
    }
}
