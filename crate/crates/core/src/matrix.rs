//! Dense complex matrices with the Hermitian-specific operations the rest of
//! the crate is built on: Kronecker products, eigenvalues, trace norms.
//!
//! Everything here is dimension-generic even though the simulator only ever
//! sees 2x2, 3x3 and 6x6 states (tests build 36x36 superoperators).

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default slack for Hermiticity / trace / positivity validation.
///
/// Loose enough to absorb fixed-step integrator drift at long times, tight
/// enough that genuine physics violations fail loudly.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A square matrix of complex numbers, addressed by 0-based `(row, col)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            data: DMatrix::from_fn(dim, dim, f),
        }
    }

    /// Diagonal matrix from real entries.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::ZERO
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[(row, col)] = value;
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            data: self.data.transpose(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            data: &self.data * factor,
        }
    }

    /// Largest elementwise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        (&self.data - &other.data)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise deviation from the conjugate transpose.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                dev = dev.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.hermiticity_deviation() <= tolerance
    }

    /// Kronecker product; the composite row index is `dim(b) * i + k` so a
    /// qutrit factor on the left and a qubit factor on the right produce the
    /// `2u + v` ordering used throughout.
    pub fn tensor_product(&self, other: &Self) -> Self {
        Self {
            data: self.data.kronecker(&other.data),
        }
    }

    /// Eigenvalues of a Hermitian matrix, in descending order.
    ///
    /// The input is validated against [`DEFAULT_TOLERANCE`] and symmetrized
    /// before decomposition so round-off never leaks imaginary parts.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let dev = self.hermiticity_deviation();
        if dev > DEFAULT_TOLERANCE {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: DEFAULT_TOLERANCE,
            });
        }
        let herm = self.symmetrized();
        let eig = herm.symmetric_eigen();
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(values)
    }

    /// Trace norm `sum_i |lambda_i|` of a Hermitian matrix.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?.iter().map(|l| l.abs()).sum())
    }

    /// Smallest eigenvalue; used for positivity checks and error reporting.
    pub(crate) fn min_hermitian_eigenvalue(&self) -> f64 {
        self.symmetrized()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Cheap sufficient test for `min eigenvalue >= -shift` of a Hermitian
    /// matrix: a Cholesky factorization of `m + shift * I` with real pivot
    /// checks. Complex `sqrt` never fails, so the pivots have to be tested
    /// by hand; a non-positive (or NaN) pivot means not positive definite.
    pub(crate) fn is_positive_with_shift(&self, shift: f64) -> bool {
        let n = self.dim();
        let mut a = self.data.clone();
        for j in 0..n {
            a[(j, j)] += C64::new(shift, 0.0);
        }
        for j in 0..n {
            let mut pivot = a[(j, j)].re;
            for k in 0..j {
                pivot -= a[(j, k)].norm_sqr();
            }
            if pivot.is_nan() || pivot <= 0.0 {
                return false;
            }
            let root = pivot.sqrt();
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= a[(i, k)] * a[(j, k)].conj();
                }
                a[(i, j)] = s / root;
            }
            a[(j, j)] = C64::new(root, 0.0);
        }
        true
    }

    fn symmetrized(&self) -> DMatrix<C64> {
        (&self.data + self.data.adjoint()) * C64::new(0.5, 0.0)
    }

    pub(crate) fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.data
    }
}

impl From<DMatrix<C64>> for ComplexMatrix {
    fn from(data: DMatrix<C64>) -> Self {
        assert_eq!(data.nrows(), data.ncols(), "matrix must be square");
        Self { data }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, index: (usize, usize)) -> &C64 {
        &self.data[index]
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data * &rhs.data,
        }
    }
}
