use super::{FinRing, PeirceError};
use crate::exact_linalg::{quotient, tensor_z, AbHom, Bilinear, Elem, FinAbGroup, LinalgError, Quotient, Subgroup, TensorZ};

/// `M ⊗_S N`, presented as the quotient of `M ⊗_Z N` by the balancing
/// relations `ms ⊗ n - m ⊗ sn`.
#[derive(Clone, Debug)]
pub struct RingTensor {
    tensor: TensorZ,
    quotient: Quotient,
}

/// Builds `M ⊗_S N` from a right action `M × S -> M` and a left action
/// `S × N -> N`. Both actions are checked to be associative on generators.
pub fn tensor_over_ring(right: &Bilinear, ring: &FinRing, left: &Bilinear) -> Result<RingTensor, PeirceError> {
    let s = ring.additive();
    if right.right() != s || right.left() != right.target() {
        return Err(PeirceError::Shape("right action must map M × S -> M".into()));
    }
    if left.left() != s || left.right() != left.target() {
        return Err(PeirceError::Shape("left action must map S × N -> N".into()));
    }
    let (m, n) = (right.left(), left.right());
    let sg = s.generators();
    for (a, x) in m.generators().iter().enumerate() {
        for (b, r) in sg.iter().enumerate() {
            let xr = right.apply(x, r);
            for (c, r2) in sg.iter().enumerate() {
                if right.apply(&xr, r2) != right.apply(x, &ring.mul(r, r2)) {
                    return Err(PeirceError::ActionNotAssociative((a, b, c)));
                }
            }
        }
    }
    for (a, r) in sg.iter().enumerate() {
        for (b, r2) in sg.iter().enumerate() {
            let rr = ring.mul(r, r2);
            for (c, y) in n.generators().iter().enumerate() {
                if left.apply(&rr, y) != left.apply(r, &left.apply(r2, y)) {
                    return Err(PeirceError::ActionNotAssociative((a, b, c)));
                }
            }
        }
    }
    Ok(RingTensor::balanced(right, left))
}

impl RingTensor {
    /// The quotient by balancing relations, without checking the actions.
    pub(crate) fn balanced(right: &Bilinear, left: &Bilinear) -> Self {
        let (m, n) = (right.left(), left.right());
        let tensor = tensor_z(m, n);
        let sg = right.right().generators();
        let ng = n.generators();
        let mut rels = Vec::new();
        for x in m.generators() {
            for r in &sg {
                let xr = right.apply(&x, r);
                for y in &ng {
                    let rel = tensor.group().sub(&tensor.pure(&xr, y), &tensor.pure(&x, &left.apply(r, y)));
                    if rel.iter().any(|&c| c != 0) {
                        rels.push(rel);
                    }
                }
            }
        }
        let sub = Subgroup::new(tensor.group(), rels).expect("relations lie in the tensor");
        let quotient = quotient(tensor.group(), &sub).expect("same ambient");
        Self { tensor, quotient }
    }

    pub fn group(&self) -> &FinAbGroup {
        self.quotient.group()
    }

    pub fn tensor(&self) -> &TensorZ {
        &self.tensor
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn left(&self) -> &FinAbGroup {
        self.tensor.left()
    }

    pub fn right(&self) -> &FinAbGroup {
        self.tensor.right()
    }

    /// The class of `x ⊗ y`.
    pub fn pure(&self, x: &[i64], y: &[i64]) -> Elem {
        self.quotient.projection().apply(&self.tensor.pure(x, y))
    }

    /// The map `M ⊗_S N -> T` induced by a balanced bilinear map; fails when
    /// `b` is not balanced.
    pub fn linearize(&self, b: &Bilinear) -> Result<AbHom, LinalgError> {
        self.quotient.induced_map(&b.on_tensor(&self.tensor))
    }
}
