//! Hermitian positive-definite skyline (profile) Cholesky factorization.
//!
//! The skeleton matrix couples dofs only through shared elements; with the
//! sweep ordering of `dofs.rs` its profile is narrow, and a column-stored
//! upper-triangular R with K = R^H R factors in O(sum of height^2).

use crate::error::{Result, SolverError};
use crate::{c64, C64};
use nalgebra::DVector;

#[derive(Debug, Clone)]
pub struct SkylineMatrix {
    n: usize,
    /// First stored (topmost) row of each column.
    first_row: Vec<usize>,
    /// Start of each column's slice in `data`; column j occupies
    /// data[offset[j] .. offset[j+1]] covering rows first_row[j ..= j].
    offsets: Vec<usize>,
    data: Vec<C64>,
    factored: bool,
}

impl SkylineMatrix {
    /// `first_row[j]` must be <= j; rows below the diagonal are implied by
    /// Hermitian symmetry.
    pub fn new(first_row: Vec<usize>) -> Self {
        let n = first_row.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut total = 0;
        for (j, &fr) in first_row.iter().enumerate() {
            assert!(fr <= j, "column {j} starts below the diagonal");
            offsets.push(total);
            total += j - fr + 1;
        }
        offsets.push(total);
        SkylineMatrix {
            n,
            first_row,
            offsets,
            data: vec![c64(0.0, 0.0); total],
            factored: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stored_entries(&self) -> usize {
        self.data.len()
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= self.first_row[j] && i <= j);
        self.offsets[j] + (i - self.first_row[j])
    }

    /// Accumulate into the upper-triangular entry (i <= j).
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        debug_assert!(!self.factored);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let (i, j, conj) = if i <= j { (i, j, false) } else { (j, i, true) };
        if i < self.first_row[j] {
            return c64(0.0, 0.0);
        }
        let v = self.data[self.idx(i, j)];
        if conj {
            v.conj()
        } else {
            v
        }
    }

    /// y = K x using the Hermitian structure (valid before factorization).
    pub fn matvec(&self, x: &DVector<C64>) -> DVector<C64> {
        assert!(!self.factored, "matrix has been overwritten by its factor");
        let mut y = DVector::from_element(self.n, c64(0.0, 0.0));
        for j in 0..self.n {
            let fr = self.first_row[j];
            let base = self.offsets[j];
            for i in fr..j {
                let v = self.data[base + i - fr];
                y[i] += v * x[j];
                y[j] += v.conj() * x[i];
            }
            y[j] += self.data[base + j - fr] * x[j];
        }
        y
    }

    /// In-place K = R^H R; fails with the pivot index on loss of positive
    /// definiteness.
    pub fn factor(&mut self) -> Result<()> {
        for j in 0..self.n {
            let frj = self.first_row[j];
            for i in frj..j {
                let fri = self.first_row[i];
                let lo = fri.max(frj);
                let mut s = self.data[self.idx(i, j)];
                for k in lo..i {
                    s -= self.data[self.idx(k, i)].conj() * self.data[self.idx(k, j)];
                }
                let rii = self.data[self.idx(i, i)];
                let k = self.idx(i, j);
                self.data[k] = s / rii;
            }
            let mut d = self.data[self.idx(j, j)];
            for k in frj..j {
                d -= c64(self.data[self.idx(k, j)].norm_sqr(), 0.0);
            }
            if !(d.re > 0.0) || !d.re.is_finite() {
                return Err(SolverError::Singular {
                    pivot: j,
                    dof: format!("pivot value {}", d.re),
                });
            }
            let k = self.idx(j, j);
            self.data[k] = c64(d.re.sqrt(), 0.0);
        }
        self.factored = true;
        Ok(())
    }

    /// Solve K x = b after `factor`.
    pub fn solve(&self, b: &DVector<C64>) -> DVector<C64> {
        assert!(self.factored, "factor() must run before solve()");
        let n = self.n;
        // forward: R^H y = b
        let mut y = b.clone();
        for j in 0..n {
            let fr = self.first_row[j];
            let base = self.offsets[j];
            let mut s = y[j];
            for i in fr..j {
                s -= self.data[base + i - fr].conj() * y[i];
            }
            y[j] = s / self.data[base + j - fr];
        }
        // backward: R x = y
        let mut x = y;
        for j in (0..n).rev() {
            let fr = self.first_row[j];
            let base = self.offsets[j];
            x[j] /= self.data[base + j - fr];
            let xj = x[j];
            for i in fr..j {
                let v = self.data[base + i - fr];
                x[i] -= v * xj;
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn dense_hpd(n: usize, seed: u64) -> DMatrix<C64> {
        let mut state = seed;
        let mut r = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let a = DMatrix::from_fn(n, n, |_, _| c64(r(), r()));
        let mut m = &a * a.adjoint();
        for i in 0..n {
            m[(i, i)] += c64(n as f64, 0.0);
        }
        m
    }

    #[test]
    fn factor_and_solve_match_dense() {
        let n = 24;
        let dense = dense_hpd(n, 7);
        let mut sky = SkylineMatrix::new((0..n).map(|j| j.saturating_sub(9)).collect());
        // entries outside the band are dropped on purpose: rebuild the dense
        // reference with the same truncation
        let mut truncated = DMatrix::from_element(n, n, c64(0.0, 0.0));
        for j in 0..n {
            for i in j.saturating_sub(9)..=j {
                sky.add(i, j, dense[(i, j)]);
                truncated[(i, j)] = dense[(i, j)];
                truncated[(j, i)] = dense[(i, j)].conj();
            }
        }
        let b = DVector::from_fn(n, |i, _| c64(i as f64 * 0.1 - 0.7, (i % 3) as f64));
        let y = sky.matvec(&b);
        let y_ref = &truncated * &b;
        assert!((y - y_ref).norm() < 1e-12);

        sky.factor().unwrap();
        let x = sky.solve(&b);
        let x_ref = truncated
            .clone()
            .cholesky()
            .expect("diagonally dominated")
            .solve(&b);
        assert!((x - x_ref).norm() < 1e-10);
    }

    #[test]
    fn indefinite_matrix_rejected() {
        let mut sky = SkylineMatrix::new(vec![0, 0, 0]);
        sky.add(0, 0, c64(1.0, 0.0));
        sky.add(1, 1, c64(-2.0, 0.0));
        sky.add(2, 2, c64(1.0, 0.0));
        match sky.factor() {
            Err(SolverError::Singular { pivot, .. }) => assert_eq!(pivot, 1),
            other => panic!("expected pivot failure, got {other:?}"),
        }
    }
}
