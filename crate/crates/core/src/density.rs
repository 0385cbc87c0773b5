//! Validated density matrices and the bipartite qutrit-qubit index layout.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, DEFAULT_TOLERANCE};

/// Eigenvalues in `(-EIGENVALUE_CLAMP, 0)` are treated as exact zeros when
/// computing entropies; anything more negative is a hard error. Keeps
/// integrator round-off from masquerading as a physics violation without
/// silently absorbing real ones.
pub const EIGENVALUE_CLAMP: f64 = 1e-10;

/// Dimensions of a bipartite system with the composite index `dim_v * u + v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteDims {
    pub dim_u: usize,
    pub dim_v: usize,
}

impl BipartiteDims {
    /// The qutrit-qubit split used throughout: index = 2u + v.
    pub const QUTRIT_QUBIT: Self = Self { dim_u: 3, dim_v: 2 };

    pub fn composite(&self) -> usize {
        self.dim_u * self.dim_v
    }

    pub fn index(&self, u: usize, v: usize) -> usize {
        debug_assert!(u < self.dim_u && v < self.dim_v);
        self.dim_v * u + v
    }
}

/// A Hermitian, unit-trace, positive-semidefinite complex matrix.
///
/// All three invariants are checked on construction against a per-instance
/// tolerance (default [`DEFAULT_TOLERANCE`]), so every `DensityMatrix` in the
/// program is a valid quantum state up to that slack.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    tolerance: f64,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        if tolerance.is_nan() || tolerance < 0.0 {
            return Err(Error::invalid("tolerance", "must be non-negative"));
        }
        let dev = matrix.hermiticity_deviation();
        if dev > tolerance {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance,
            });
        }
        let tr = matrix.trace();
        let tr_dev = (tr - C64::ONE).norm();
        if tr_dev > tolerance {
            return Err(Error::TraceNotOne {
                deviation: tr_dev,
                tolerance,
            });
        }
        // Fast path: a shifted Cholesky certifies min eigenvalue >= -tol.
        // Only on failure do we pay for the eigendecomposition, which then
        // yields the offending eigenvalue for the error message.
        if !matrix.is_positive_with_shift(tolerance) {
            let min = matrix.min_hermitian_eigenvalue();
            if min < -tolerance {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: min,
                    tolerance,
                });
            }
        }
        Ok(Self { matrix, tolerance })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix.get(row, col)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `Tr(rho^2)`, computed as the squared Frobenius norm of a Hermitian
    /// matrix; lies in `[1/dim, 1]`.
    pub fn purity(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                sum += self.matrix.get(i, j).norm_sqr();
            }
        }
        sum
    }

    /// Von Neumann entropy `-sum lambda_i log2 lambda_i` in bits.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let mut entropy = 0.0;
        for lambda in self.matrix.hermitian_eigenvalues()? {
            if lambda <= -EIGENVALUE_CLAMP {
                return Err(Error::NegativeEigenvalue { eigenvalue: lambda });
            }
            if lambda > 0.0 {
                entropy -= lambda * lambda.log2();
            }
        }
        Ok(entropy)
    }

    /// Reduced state of the qubit `V`: `(rho_V)_{vv'} = sum_u rho_{(uv),(uv')}`.
    pub fn partial_trace_over_u(&self) -> Result<DensityMatrix> {
        let dims = self.qutrit_qubit_dims()?;
        let reduced = ComplexMatrix::from_fn(dims.dim_v, |v, vp| {
            (0..dims.dim_u)
                .map(|u| self.matrix.get(dims.index(u, v), dims.index(u, vp)))
                .sum()
        });
        DensityMatrix::with_tolerance(reduced, self.tolerance)
    }

    /// Reduced state of the qutrit `U`.
    pub fn partial_trace_over_v(&self) -> Result<DensityMatrix> {
        let dims = self.qutrit_qubit_dims()?;
        let reduced = ComplexMatrix::from_fn(dims.dim_u, |u, up| {
            (0..dims.dim_v)
                .map(|v| self.matrix.get(dims.index(u, v), dims.index(up, v)))
                .sum()
        });
        DensityMatrix::with_tolerance(reduced, self.tolerance)
    }

    /// Partial transpose on the qutrit factor: `(u,v),(u',v') -> (u',v),(u,v')`.
    ///
    /// The result is Hermitian with unit trace but in general not positive,
    /// so it is returned as a plain matrix.
    pub fn partial_transpose_u(&self) -> Result<ComplexMatrix> {
        let dims = self.qutrit_qubit_dims()?;
        let mut out = ComplexMatrix::zeros(dims.composite());
        for u in 0..dims.dim_u {
            for up in 0..dims.dim_u {
                for v in 0..dims.dim_v {
                    for vp in 0..dims.dim_v {
                        out.set(
                            dims.index(u, v),
                            dims.index(up, vp),
                            self.matrix.get(dims.index(up, v), dims.index(u, vp)),
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    fn qutrit_qubit_dims(&self) -> Result<BipartiteDims> {
        let dims = BipartiteDims::QUTRIT_QUBIT;
        if self.dim() != dims.composite() {
            return Err(Error::DimensionMismatch {
                expected: dims.composite(),
                actual: self.dim(),
            });
        }
        Ok(dims)
    }
}
