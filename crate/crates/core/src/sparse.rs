//! Row-compressed operator used inside the time-stepping hot loops, where
//! every generator (ladder operators, Pauli tensors) has a handful of
//! entries per row.

use nalgebra::DMatrix;

use crate::qcore::{Operator, C64};

#[derive(Debug, Clone)]
pub(crate) struct CsrOperator {
    dim: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl CsrOperator {
    pub(crate) fn from_dense(m: &DMatrix<C64>) -> Self {
        let dim = m.nrows();
        let mut row_start = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        for i in 0..dim {
            for j in 0..dim {
                let v = m[(i, j)];
                if v.re != 0.0 || v.im != 0.0 {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_start.push(cols.len());
        }
        CsrOperator {
            dim,
            row_start,
            cols,
            vals,
        }
    }

    pub(crate) fn from_operator(op: &Operator) -> Self {
        Self::from_dense(op.matrix())
    }

    /// `out = self · rhs` with `out` pre-allocated.
    pub(crate) fn mul_into(&self, rhs: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        debug_assert_eq!(rhs.nrows(), self.dim);
        for c in 0..rhs.ncols() {
            let src = rhs.column(c);
            let mut dst = out.column_mut(c);
            for i in 0..self.dim {
                let mut acc = C64::new(0.0, 0.0);
                for k in self.row_start[i]..self.row_start[i + 1] {
                    acc += self.vals[k] * src[self.cols[k]];
                }
                dst[i] = acc;
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn mul(&self, rhs: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.dim, rhs.ncols());
        self.mul_into(rhs, &mut out);
        out
    }

    /// `out += scale · self · rhs`.
    pub(crate) fn mul_add_into(&self, scale: C64, rhs: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        for c in 0..rhs.ncols() {
            let src = rhs.column(c);
            let mut dst = out.column_mut(c);
            for i in 0..self.dim {
                let mut acc = C64::new(0.0, 0.0);
                for k in self.row_start[i]..self.row_start[i + 1] {
                    acc += self.vals[k] * src[self.cols[k]];
                }
                dst[i] += scale * acc;
            }
        }
    }
}

/// `y += a·x`, elementwise.
pub(crate) fn axpy(y: &mut DMatrix<C64>, a: C64, x: &DMatrix<C64>) {
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi += a * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_product() {
        let a = DMatrix::from_fn(5, 5, |i, j| {
            if (i + 2 * j) % 3 == 0 {
                C64::new(i as f64 - 1.0, j as f64 * 0.5)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let b = DMatrix::from_fn(5, 3, |i, j| C64::new((i * j) as f64, 1.0 - i as f64));
        let dense = &a * &b;
        let sparse = CsrOperator::from_dense(&a).mul(&b);
        assert!((dense - sparse).norm() < 1e-14);

        let mut acc = DMatrix::zeros(5, 3);
        CsrOperator::from_dense(&a).mul_add_into(C64::new(0.0, 2.0), &b, &mut acc);
        assert!((acc - (&a * &b) * C64::new(0.0, 2.0)).norm() < 1e-12);
    }
}
