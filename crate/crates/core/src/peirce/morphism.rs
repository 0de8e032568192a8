use super::{PeirceError, PeirceRing};
use crate::exact_linalg::{AbHom, Elem};

/// A map of Peirce rings given blockwise, `f_ij: S_ij -> R_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeirceHom {
    source: PeirceRing,
    target: PeirceRing,
    blocks: Vec<Vec<AbHom>>,
}

impl PeirceHom {
    pub fn new(source: PeirceRing, target: PeirceRing, blocks: Vec<Vec<AbHom>>) -> Result<Self, PeirceError> {
        let l = source.rank();
        if target.rank() != l || blocks.len() != l || blocks.iter().any(|r| r.len() != l) {
            return Err(PeirceError::Shape("blockwise map needs matching ranks".into()));
        }
        for i in 0..l {
            for j in 0..l {
                let f = &blocks[i][j];
                if f.source() != source.block(i, j) || f.target() != target.block(i, j) {
                    return Err(PeirceError::Shape(format!("block map ({i},{j}) has the wrong domain")));
                }
            }
        }
        Ok(Self { source, target, blocks })
    }

    pub fn identity(r: &PeirceRing) -> Self {
        let l = r.rank();
        let blocks = (0..l)
            .map(|i| (0..l).map(|j| AbHom::identity(r.block(i, j))).collect())
            .collect();
        Self {
            source: r.clone(),
            target: r.clone(),
            blocks,
        }
    }

    pub fn source(&self) -> &PeirceRing {
        &self.source
    }

    pub fn target(&self) -> &PeirceRing {
        &self.target
    }

    pub fn block(&self, i: usize, j: usize) -> &AbHom {
        &self.blocks[i][j]
    }

    pub fn apply(&self, x: &[i64]) -> Elem {
        let l = self.source.rank();
        let mut out = self.target.flat().zero();
        for i in 0..l {
            for j in 0..l {
                let y = self.blocks[i][j].apply(&self.source.component(x, i, j));
                let o = self.target.offset(i, j);
                out[o..o + y.len()].copy_from_slice(&y);
            }
        }
        out
    }

    /// First `(i, j, k)` and generator pair with `f(xy) != f(x) f(y)`.
    pub fn multiplicativity_failure(&self) -> Option<((usize, usize, usize), (usize, usize))> {
        let l = self.source.rank();
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    let ms = self.source.mult(i, j, k);
                    let mt = self.target.mult(i, j, k);
                    let (fij, fjk, fik) = (&self.blocks[i][j], &self.blocks[j][k], &self.blocks[i][k]);
                    for a in 0..ms.left().rank() {
                        for b in 0..ms.right().rank() {
                            let lhs = fik.apply(ms.entry(a, b));
                            let rhs = mt.apply(&fij.images()[a], &fjk.images()[b]);
                            if lhs != rhs {
                                return Some(((i, j, k), (a, b)));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Bijectivity of each block map.
    pub fn bijective_blocks(&self) -> Vec<Vec<bool>> {
        self.blocks
            .iter()
            .map(|r| r.iter().map(|f| f.is_isomorphism()).collect())
            .collect()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.multiplicativity_failure().is_none() && self.bijective_blocks().iter().flatten().all(|&b| b)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &PeirceHom) -> Result<PeirceHom, PeirceError> {
        if self.target != after.source {
            return Err(PeirceError::Shape("composition of incompatible ring maps".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&after.blocks)
            .map(|(r, s)| r.iter().zip(s).map(|(f, g)| f.then(g)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            source: self.source.clone(),
            target: after.target.clone(),
            blocks,
        })
    }

    /// Blockwise inverse of an isomorphism.
    pub fn inverse(&self) -> Option<PeirceHom> {
        let blocks = self
            .blocks
            .iter()
            .map(|r| r.iter().map(|f| f.inverse()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks,
        })
    }
}
