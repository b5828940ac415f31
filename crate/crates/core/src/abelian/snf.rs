use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal, nonnegative,
/// `d1 | d2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Full postcondition check against the input matrix.
    pub fn check(&self, a: &IntMatrix) -> Result<(), String> {
        if !self.u.is_unimodular() {
            return Err("U is not unimodular".into());
        }
        if !self.v.is_unimodular() {
            return Err("V is not unimodular".into());
        }
        if self.u.mul(a).mul(&self.v) != self.s {
            return Err("U*A*V != S".into());
        }
        if !self.s.is_diagonal() {
            return Err("S is not diagonal".into());
        }
        let diag = self.diagonal();
        if diag.iter().any(|d| d.is_negative()) {
            return Err("negative diagonal entry".into());
        }
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            };
            if !divides {
                return Err(format!("divisibility chain broken at {} | {}", w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// Smith normal form with transforms. Pivots on the smallest nonzero
/// absolute entry of the remaining block.
///
/// Panics if the result fails its own postcondition check.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        while let Some((pi, pj)) = s.min_abs_entry(t) {
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -IntMatrix::floor_div(s.get(i, t), &pivot);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !s.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -IntMatrix::floor_div(s.get(t, j), &pivot);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !(s.get(i, j) % &pivot).is_zero())
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }

    let form = SmithForm { s, u, v };
    if let Err(e) = form.check(a) {
        panic!("Smith normal form postcondition failed for {a}: {e}");
    }
    form
}
