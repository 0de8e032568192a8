//! Smith normal form over the integers with unimodular transforms.
//!
//! Entries are carried as `BigInt` throughout; the matrices handled here are
//! small, so exactness wins over speed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type BigMatrix = Vec<Vec<BigInt>>;

/// Result of [`smith_normal_form`]: `u * m * v == s`, with `v_inv` the
/// inverse of `v`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: BigMatrix,
    pub u: BigMatrix,
    pub v: BigMatrix,
    pub v_inv: BigMatrix,
    /// Nonzero diagonal entries of `s`, in order. Each divides the next.
    pub invariants: Vec<BigInt>,
}

pub fn identity(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn to_big(m: &[Vec<i64>]) -> BigMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn mat_mul(a: &BigMatrix, b: &BigMatrix, inner: usize) -> BigMatrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &BigMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

struct Work {
    a: BigMatrix,
    u: BigMatrix,
    v: BigMatrix,
    v_inv: BigMatrix,
    rows: usize,
    cols: usize,
}

impl Work {
    // row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let d = q * &self.a[t][j];
            self.a[i][j] -= d;
        }
        for j in 0..self.rows {
            let d = q * &self.u[t][j];
            self.u[i][j] -= d;
        }
    }

    fn row_swap(&mut self, i: usize, t: usize) {
        self.a.swap(i, t);
        self.u.swap(i, t);
    }

    fn row_neg(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        for x in self.u[i].iter_mut() {
            *x = -&*x;
        }
    }

    // col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let d = q * &self.a[r][t];
            self.a[r][j] -= d;
        }
        for r in 0..self.cols {
            let d = q * &self.v[r][t];
            self.v[r][j] -= d;
        }
        // inverse transform: row_t(v_inv) += q * row_j(v_inv)
        for c in 0..self.cols {
            let d = q * &self.v_inv[j][c];
            self.v_inv[t][c] += d;
        }
    }

    fn col_swap(&mut self, j: usize, t: usize) {
        for r in 0..self.rows {
            self.a[r].swap(j, t);
        }
        for r in 0..self.cols {
            self.v[r].swap(j, t);
        }
        self.v_inv.swap(j, t);
    }

    fn row_add(&mut self, t: usize, i: usize) {
        for j in 0..self.cols {
            let d = self.a[i][j].clone();
            self.a[t][j] += d;
        }
        for j in 0..self.rows {
            let d = self.u[i][j].clone();
            self.u[t][j] += d;
        }
    }
}

/// Computes the Smith normal form of an integer matrix given as rows.
///
/// Every row must have the same length; an empty slice is a 0x0 matrix.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Smith {
    let cols = m.first().map_or(0, |r| r.len());
    smith_normal_form_big(&to_big(m), cols)
}

pub fn smith_normal_form_big(m: &BigMatrix, cols: usize) -> Smith {
    let rows = m.len();
    assert!(m.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut w = Work {
        a: m.clone(),
        u: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
        rows,
        cols,
    };
    let mut invariants = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if w.a[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if w.a[bi][bj].abs() <= w.a[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.row_sub(i, t, &q);
                if !w.a[i][t].is_zero() {
                    w.row_swap(i, t);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.col_sub(j, t, &q);
                if !w.a[t][j].is_zero() {
                    w.col_swap(j, t);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot row and column are clear; enforce divisibility
            let p = w.a[t][t].clone();
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => w.row_add(t, i),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.row_neg(t);
        }
        invariants.push(w.a[t][t].clone());
    }
    Smith {
        s: w.a,
        u: w.u,
        v: w.v,
        v_inv: w.v_inv,
        invariants,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &[Vec<i64>]) -> Smith {
        let res = smith_normal_form(m);
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let um = mat_mul(&res.u, &to_big(m), rows);
        let umv = mat_mul(&um, &res.v, cols);
        assert_eq!(umv, res.s);
        assert_eq!(determinant(&res.u).abs(), BigInt::one());
        assert_eq!(determinant(&res.v).abs(), BigInt::one());
        assert_eq!(mat_mul(&res.v, &res.v_inv, cols), identity(cols));
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    assert!(res.s[i][j].is_zero());
                }
            }
        }
        for w in res.invariants.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        res
    }

    fn diag(res: &Smith) -> Vec<i64> {
        let n = res.s.len().min(res.s.first().map_or(0, |r| r.len()));
        (0..n)
            .map(|i| i64::try_from(&res.s[i][i]).unwrap())
            .collect()
    }

    #[test]
    fn coprime_diagonal() {
        let res = check(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(diag(&res), vec![1, 6]);
    }

    #[test]
    fn zero_matrix_keeps_identity_transforms() {
        let res = check(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(diag(&res), vec![0, 0]);
        assert_eq!(res.u, identity(2));
        assert_eq!(res.v, identity(2));
    }

    #[test]
    fn hand_elimination_example() {
        let res = check(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(diag(&res), vec![2, 4]);
    }

    #[test]
    fn rectangular() {
        let res = check(&[vec![4, 6, 2], vec![2, 2, 8]]);
        assert_eq!(diag(&res), vec![2, 2]);
        let res = check(&[vec![3], vec![6], vec![9]]);
        assert_eq!(diag(&res), vec![3]);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&to_big(&[vec![2, 4], vec![6, 8]])), BigInt::from(-8));
        assert_eq!(determinant(&to_big(&[vec![0, 1], vec![1, 0]])), BigInt::from(-1));
    }

    proptest::proptest! {
        #[test]
        fn random_small_matrices(rows in 1usize..=4, cols in 1usize..=4,
                                 entries in proptest::collection::vec(-16i64..=16, 16)) {
            let m: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| entries[i * 4 + j]).collect())
                .collect();
            check(&m);
        }
    }
}
