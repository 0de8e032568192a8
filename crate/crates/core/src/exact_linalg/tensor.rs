use super::{AbHom, Elem, FinAbGroup, LinalgError};
use num_integer::Integer;

/// `A ⊗_Z B` for finite abelian groups: the sum of `Z/gcd(d_i, e_j)` over
/// generator pairs, with pairs of coprime order dropped.
#[derive(Clone, Debug)]
pub struct TensorZ {
    left: FinAbGroup,
    right: FinAbGroup,
    group: FinAbGroup,
    index: Vec<Vec<Option<usize>>>,
}

pub fn tensor_z(a: &FinAbGroup, b: &FinAbGroup) -> TensorZ {
    let mut orders = Vec::new();
    let mut index = vec![vec![None; b.rank()]; a.rank()];
    for (i, &d) in a.orders().iter().enumerate() {
        for (j, &e) in b.orders().iter().enumerate() {
            let g = d.gcd(&e);
            if g > 1 {
                index[i][j] = Some(orders.len());
                orders.push(g);
            }
        }
    }
    TensorZ {
        left: a.clone(),
        right: b.clone(),
        group: FinAbGroup::new(&orders).expect("gcds are positive"),
        index,
    }
}

impl TensorZ {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn left(&self) -> &FinAbGroup {
        &self.left
    }

    pub fn right(&self) -> &FinAbGroup {
        &self.right
    }

    /// Generator of the tensor corresponding to `g_i ⊗ h_j`, or `None` when
    /// that pure tensor is zero.
    pub fn pure_generator(&self, i: usize, j: usize) -> Option<usize> {
        self.index[i][j]
    }

    /// `x ⊗ y`, extended biadditively from generator pairs.
    pub fn pure(&self, x: &[i64], y: &[i64]) -> Elem {
        let mut out = self.group.zero_elem();
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                if let Some(k) = self.index[i][j] {
                    out[k] = (out[k] + a * b).rem_euclid(self.group.orders()[k]);
                }
            }
        }
        out
    }

    /// Generator pairs `(i, j)` indexed by tensor generator.
    pub fn generator_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = vec![(0, 0); self.group.rank()];
        for (i, row) in self.index.iter().enumerate() {
            for (j, k) in row.iter().enumerate() {
                if let Some(k) = *k {
                    pairs[k] = (i, j);
                }
            }
        }
        pairs
    }

    /// `f ⊗ g`.
    pub fn tensor_maps(&self, f: &AbHom, g: &AbHom, target: &TensorZ) -> AbHom {
        debug_assert_eq!(f.source(), &self.left);
        debug_assert_eq!(g.source(), &self.right);
        let images = self
            .generator_pairs()
            .into_iter()
            .map(|(i, j)| target.pure(&f.images()[i], &g.images()[j]))
            .collect();
        AbHom::from_parts(self.group.clone(), target.group.clone(), images)
    }
}

/// A biadditive map `L × R -> T`, stored on generator pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bilinear {
    left: FinAbGroup,
    right: FinAbGroup,
    target: FinAbGroup,
    table: Vec<Vec<Elem>>,
    // nonzero coordinates of each table entry
    sparse: Vec<Vec<Vec<(usize, i64)>>>,
}

impl Bilinear {
    /// Checks that `gcd(d_a, e_b)` kills every table entry, which is exactly
    /// the condition for extending biadditively.
    pub fn new(
        left: FinAbGroup,
        right: FinAbGroup,
        target: FinAbGroup,
        table: Vec<Vec<Elem>>,
    ) -> Result<Self, LinalgError> {
        if table.len() != left.rank() || table.iter().any(|r| r.len() != right.rank()) {
            return Err(LinalgError::Shape(format!(
                "bilinear table must be {}x{}",
                left.rank(),
                right.rank()
            )));
        }
        for (a, row) in table.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                target.check(v)?;
                let g = left.orders()[a].gcd(&right.orders()[b]);
                if !target.is_zero(&target.scale(g, v)) {
                    return Err(LinalgError::InvalidHom {
                        generator: a * right.rank() + b,
                        order: g,
                        image: v.clone(),
                    });
                }
            }
        }
        Ok(Self::from_table(left, right, target, table))
    }

    pub(crate) fn from_table(
        left: FinAbGroup,
        right: FinAbGroup,
        target: FinAbGroup,
        table: Vec<Vec<Elem>>,
    ) -> Self {
        let sparse = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        v.iter()
                            .enumerate()
                            .filter(|(_, &c)| c != 0)
                            .map(|(k, &c)| (k, c))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            left,
            right,
            target,
            table,
            sparse,
        }
    }

    pub fn zero(left: &FinAbGroup, right: &FinAbGroup, target: &FinAbGroup) -> Self {
        let table = vec![vec![target.zero_elem(); right.rank()]; left.rank()];
        Self::from_table(left.clone(), right.clone(), target.clone(), table)
    }

    /// Builds the table by evaluating `f` on generator pairs.
    pub fn from_fn(
        left: &FinAbGroup,
        right: &FinAbGroup,
        target: &FinAbGroup,
        mut f: impl FnMut(usize, usize) -> Elem,
    ) -> Result<Self, LinalgError> {
        let table = (0..left.rank())
            .map(|a| (0..right.rank()).map(|b| target.reduce(&f(a, b))).collect())
            .collect();
        Self::new(left.clone(), right.clone(), target.clone(), table)
    }

    pub fn left(&self) -> &FinAbGroup {
        &self.left
    }

    pub fn right(&self) -> &FinAbGroup {
        &self.right
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn table(&self) -> &[Vec<Elem>] {
        &self.table
    }

    pub fn entry(&self, a: usize, b: usize) -> &Elem {
        &self.table[a][b]
    }

    pub fn is_zero(&self) -> bool {
        self.sparse.iter().flatten().all(|v| v.is_empty())
    }

    pub fn apply(&self, x: &[i64], y: &[i64]) -> Elem {
        let mut acc = vec![0i64; self.target.rank()];
        self.accumulate(&mut acc, 1, x, y);
        self.target.reduce(&acc)
    }

    /// `acc += k * m(x, y)` without reduction; callers reduce.
    pub(crate) fn accumulate(&self, acc: &mut [i64], k: i64, x: &[i64], y: &[i64]) {
        let tord = self.target.orders();
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            let row = &self.sparse[a];
            for (b, &yb) in y.iter().enumerate() {
                if yb == 0 {
                    continue;
                }
                let c = k * xa * yb;
                for &(t, v) in &row[b] {
                    acc[t] = (acc[t] + c * v) % tord[t];
                }
            }
        }
    }

    /// `x ↦ m(x, y)`.
    pub fn fix_right(&self, y: &[i64]) -> AbHom {
        let images = self.left.generators().iter().map(|g| self.apply(g, y)).collect();
        AbHom::from_parts(self.left.clone(), self.target.clone(), images)
    }

    /// `y ↦ m(x, y)`.
    pub fn fix_left(&self, x: &[i64]) -> AbHom {
        let images = self.right.generators().iter().map(|g| self.apply(x, g)).collect();
        AbHom::from_parts(self.right.clone(), self.target.clone(), images)
    }

    /// The linearization `L ⊗ R -> T`.
    pub fn on_tensor(&self, t: &TensorZ) -> AbHom {
        debug_assert_eq!(t.left(), &self.left);
        debug_assert_eq!(t.right(), &self.right);
        let images = t
            .generator_pairs()
            .into_iter()
            .map(|(a, b)| self.table[a][b].clone())
            .collect();
        AbHom::from_parts(t.group().clone(), self.target.clone(), images)
    }

    /// `(x, y) ↦ h(m(x, y))`.
    pub fn then(&self, h: &AbHom) -> Bilinear {
        debug_assert_eq!(h.source(), &self.target);
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|v| h.apply(v)).collect())
            .collect();
        Self::from_table(self.left.clone(), self.right.clone(), h.target().clone(), table)
    }

    /// `(x, y) ↦ m(f(x), g(y))`.
    pub fn precompose(&self, f: &AbHom, g: &AbHom) -> Bilinear {
        let table = f
            .images()
            .iter()
            .map(|fx| g.images().iter().map(|gy| self.apply(fx, gy)).collect())
            .collect();
        Self::from_table(f.source().clone(), g.source().clone(), self.target.clone(), table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_rule() {
        let t = tensor_z(&FinAbGroup::cyclic(2), &FinAbGroup::cyclic(4));
        assert_eq!(t.group().orders(), &[2]);
        let t = tensor_z(&FinAbGroup::cyclic(2), &FinAbGroup::cyclic(3));
        assert!(t.group().is_trivial());
        let t = tensor_z(&FinAbGroup::new(&[2, 2]).unwrap(), &FinAbGroup::cyclic(2));
        assert_eq!(t.group().orders(), &[2, 2]);
    }

    #[test]
    fn pure_tensor_is_biadditive() {
        let a = FinAbGroup::new(&[4, 6]).unwrap();
        let b = FinAbGroup::new(&[6, 2]).unwrap();
        let t = tensor_z(&a, &b);
        for x in a.elements() {
            for y in b.elements().step_by(3) {
                for y2 in b.elements().step_by(5) {
                    let lhs = t.pure(&x, &b.add(&y, &y2));
                    let rhs = t.group().add(&t.pure(&x, &y), &t.pure(&x, &y2));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn bilinear_validity() {
        let z2 = FinAbGroup::cyclic(2);
        let z4 = FinAbGroup::cyclic(4);
        assert!(Bilinear::new(z2.clone(), z4.clone(), z4.clone(), vec![vec![vec![1]]]).is_err());
        let m = Bilinear::new(z2.clone(), z4.clone(), z4.clone(), vec![vec![vec![2]]]).unwrap();
        assert_eq!(m.apply(&[1], &[3]), vec![2]);
    }
}
