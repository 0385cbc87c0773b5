//! Information measures on qutrit-qubit states: projective dephasing on the
//! qutrit, memory-assisted entropic uncertainty (left side `L` and bound `R`),
//! negativity, and mixedness.

use num_complex::Complex64 as C64;

use crate::bath::BathCoefficients;
use crate::density::DensityMatrix;
use crate::dynamics::InitialFamily;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Eigenbases must be orthonormal to this accuracy, and the spectral
/// synthesis reproduces the observable matrix to the same accuracy.
pub const ORTHONORMALITY_TOLERANCE: f64 = 1e-12;

/// Trace-norm round-off below this magnitude reports as exactly zero
/// negativity; anything more negative is an error.
pub const NEGATIVITY_CLAMP: f64 = 1e-12;

/// Numeric slack allowed on the uncertainty relation `L >= R`.
pub const UNCERTAINTY_SLACK: f64 = 1e-9;

/// A named Hermitian qutrit observable carried together with its orthonormal
/// eigensystem; the matrix is synthesized from the eigensystem so the two can
/// never drift apart.
#[derive(Clone, Debug)]
pub struct Observable {
    name: String,
    matrix: ComplexMatrix,
    eigenvalues: [f64; 3],
    eigenvectors: [[C64; 3]; 3],
}

impl Observable {
    pub fn from_eigensystem(
        name: &str,
        eigenvalues: [f64; 3],
        eigenvectors: [[C64; 3]; 3],
    ) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                let dot: C64 = (0..3)
                    .map(|k| eigenvectors[i][k].conj() * eigenvectors[j][k])
                    .sum();
                let want = if i == j { C64::ONE } else { C64::ZERO };
                if (dot - want).norm() > ORTHONORMALITY_TOLERANCE {
                    return Err(Error::invalid(
                        "eigenvectors",
                        format!("vectors {i} and {j} are not orthonormal: <{i}|{j}> = {dot}"),
                    ));
                }
            }
        }
        let matrix = ComplexMatrix::from_fn(3, |r, c| {
            (0..3)
                .map(|i| eigenvectors[i][r] * eigenvectors[i][c].conj() * eigenvalues[i])
                .sum()
        });
        Ok(Self {
            name: name.to_owned(),
            matrix,
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64; 3] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, i: usize) -> &[C64; 3] {
        &self.eigenvectors[i]
    }

    /// Rank-one projector `|v_i><v_i|`.
    pub fn projector(&self, i: usize) -> ComplexMatrix {
        let v = &self.eigenvectors[i];
        ComplexMatrix::from_fn(3, |r, c| v[r] * v[c].conj())
    }
}

/// `sigma_z = |0><0| - |2><2|`, diagonal in the computational basis.
pub fn qutrit_sigma_z() -> Observable {
    let o = C64::ZERO;
    let one = C64::ONE;
    Observable::from_eigensystem(
        "sigma_z",
        [1.0, 0.0, -1.0],
        [[one, o, o], [o, one, o], [o, o, one]],
    )
    .expect("computational basis is orthonormal")
}

/// The spin-1 x observable with `1/sqrt(2)` off-diagonals.
pub fn qutrit_sigma_x() -> Observable {
    let h = C64::new(0.5, 0.0);
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let o = C64::ZERO;
    Observable::from_eigensystem(
        "sigma_x",
        [1.0, 0.0, -1.0],
        [[h, s, h], [s, o, -s], [h, -s, h]],
    )
    .expect("sigma_x eigenbasis is orthonormal")
}

/// Maximal squared overlap `c = max_ij |<phi_i|psi_j>|^2` between the
/// eigenbases; lies in [1/3, 1] for qutrit observables.
pub fn overlap_c(o1: &Observable, o2: &Observable) -> f64 {
    let mut c: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let dot: C64 = (0..3)
                .map(|k| o1.eigenvector(i)[k].conj() * o2.eigenvector(j)[k])
                .sum();
            c = c.max(dot.norm_sqr());
        }
    }
    c
}

/// Dephases the qutrit in the observable eigenbasis:
/// `sum_i (P_i x I) rho (P_i x I)`. Trace-preserving and idempotent.
pub fn post_measurement_state(rho: &DensityMatrix, obs: &Observable) -> Result<DensityMatrix> {
    if rho.dim() != 6 {
        return Err(Error::DimensionMismatch {
            expected: 6,
            actual: rho.dim(),
        });
    }
    let identity_v = ComplexMatrix::identity(2);
    let mut acc = ComplexMatrix::zeros(6);
    for i in 0..3 {
        let lifted = obs.projector(i).tensor_product(&identity_v);
        acc = &acc + &(&(&lifted * rho.matrix()) * &lifted);
    }
    DensityMatrix::with_tolerance(acc, rho.tolerance())
}

/// Conditional entropy `S(U|V) = S(rho_UV) - S(rho_V)` in bits.
pub fn conditional_entropy(rho: &DensityMatrix) -> Result<f64> {
    let joint = rho.von_neumann_entropy()?;
    let memory = rho.partial_trace_over_u()?.von_neumann_entropy()?;
    Ok(joint - memory)
}

/// Left side of the uncertainty relation: `S(sigma_z|V) + S(sigma_x|V)`.
pub fn entropic_uncertainty_l(rho: &DensityMatrix) -> Result<f64> {
    let z = conditional_entropy(&post_measurement_state(rho, &qutrit_sigma_z())?)?;
    let x = conditional_entropy(&post_measurement_state(rho, &qutrit_sigma_x())?)?;
    Ok(z + x)
}

/// Right side of the uncertainty relation: `S(U|V) + log2(1/c)`.
///
/// `c` is computed from the eigenbases rather than hard-coded to 1/2, so an
/// eigenbasis bug shows up here instead of silently shifting the bound.
pub fn entropic_bound_r(rho: &DensityMatrix) -> Result<f64> {
    let c = overlap_c(&qutrit_sigma_z(), &qutrit_sigma_x());
    Ok(conditional_entropy(rho)? + (1.0 / c).log2())
}

/// Negativity `||rho^{T_U}||_1 - 1`, clamped to zero inside the round-off
/// window `(-NEGATIVITY_CLAMP, 0)`.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let value = rho.partial_transpose_u()?.trace_norm()? - 1.0;
    if value <= -NEGATIVITY_CLAMP {
        return Err(Error::invalid(
            "negativity",
            format!("trace norm fell below 1 by {value:.3e}"),
        ));
    }
    Ok(value.max(0.0))
}

/// Normalized linear entropy `X = d/(d-1) [1 - Tr(rho^2)]`, in [0, 1].
pub fn mixedness(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    d / (d - 1.0) * (1.0 - rho.purity())
}

/// Mixedness of the closed-form trajectory as a polynomial in
/// `e^{-4 A tau}`:
///
/// `X = -3 {A^2 [(f(3f-2)-3) + 2(f(5f-4)+1) E + (1-3f)^2 E^2]
///         + B^2 (f(3f-2)+1)(1-E)^2} / (10 A^2)`,   `E = e^{-4 A tau}`.
///
/// Collapses to `4.8 f - 6.6 f^2` at `tau = 0`.
pub fn mixedness_closed_form(family: &InitialFamily, coeffs: &BathCoefficients, tau: f64) -> f64 {
    let (f, a, b) = (family.f(), coeffs.a(), coeffs.b());
    let e = (-4.0 * a * tau).exp();
    let t1 = f * (3.0 * f - 2.0) - 3.0;
    let t2 = 2.0 * (f * (5.0 * f - 4.0) + 1.0);
    let t3 = (1.0 - 3.0 * f) * (1.0 - 3.0 * f);
    let tb = f * (3.0 * f - 2.0) + 1.0;
    let poly = a * a * (t1 + t2 * e + t3 * e * e) + b * b * tb * (1.0 - e) * (1.0 - e);
    -3.0 * poly / (10.0 * a * a)
}

/// One row of measures for a state at proper time `tau`. Construction checks
/// the uncertainty relation (within [`UNCERTAINTY_SLACK`]) and the ranges of
/// negativity and mixedness, so an invalid report can never be emitted.
#[derive(Clone, Copy, Debug)]
pub struct UncertaintyReport {
    pub tau: f64,
    pub l: f64,
    pub r: f64,
    pub c: f64,
    pub negativity: f64,
    pub mixedness: f64,
    pub purity: f64,
}

impl UncertaintyReport {
    pub fn from_state(tau: f64, rho: &DensityMatrix) -> Result<Self> {
        let l = entropic_uncertainty_l(rho)?;
        let r = entropic_bound_r(rho)?;
        if l < r - UNCERTAINTY_SLACK {
            return Err(Error::UncertaintyViolation { l, r });
        }
        let negativity = negativity(rho)?;
        let mixedness = mixedness(rho);
        if !(-1e-12..=1.0 + 1e-12).contains(&mixedness) {
            return Err(Error::invalid(
                "mixedness",
                format!("out of range: {mixedness}"),
            ));
        }
        Ok(Self {
            tau,
            l,
            r,
            c: overlap_c(&qutrit_sigma_z(), &qutrit_sigma_x()),
            negativity,
            mixedness,
            purity: rho.purity(),
        })
    }
}
