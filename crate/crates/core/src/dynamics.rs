//! Lindblad dynamics of the qutrit-qubit pair: the generator lifted to the
//! composite space, numeric integration, the closed-form trajectory of the
//! one-parameter initial family, equilibria, and the weak-measurement-reversal
//! filter.
//!
//! The environment couples only to the qubit `V`, so the dissipator is the
//! qubit-level Kossakowski form applied identically to every 2x2 `V`-block of
//! the 6x6 state. The effective-Hamiltonian commutator is omitted: its
//! frequency shift involves a Hilbert-transform integral that is never
//! evaluated in closed form, and it acts as a local unitary on `V` alone,
//! under which every measure computed downstream is invariant. Coherence
//! phases are therefore reported in the rotating frame.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;

use crate::bath::BathCoefficients;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

const DIM: usize = 6;

/// Fixed-step RK4 resolution policy: `4 A dt <= RK4_STEP_BUDGET`.
pub const RK4_STEP_BUDGET: f64 = 0.01;

/// Relaxation is complete once `e^{-4 A tau} <= e^{-40}`, far below double
/// precision; `equilibrium_tau` returns this threshold time `10 / A`.
pub const EQUILIBRIUM_DECAY_EXPONENT: f64 = 40.0;

/// The one-parameter family of initial qutrit-qubit states, `f` in [0, 1/3];
/// `f = 0` is the maximally entangled member and `f = 1/3` the separable one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialFamily {
    f: f64,
}

impl InitialFamily {
    pub fn new(f: f64) -> Result<Self> {
        if !f.is_finite() || !(0.0..=1.0 / 3.0).contains(&f) {
            return Err(Error::invalid(
                "f",
                format!("must lie in [0, 1/3], got {f}"),
            ));
        }
        Ok(Self { f })
    }

    pub fn f(&self) -> f64 {
        self.f
    }
}

/// Kossakowski coefficient matrix `S_ij = A d_ij - i B e_ij3 - A d_3i d_3j`:
/// the 2x2 block `[[A, -iB], [iB, A]]` padded with a zero third row/column.
/// Positive semidefinite with eigenvalues `{0, A + B, A - B}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KossakowskiMatrix {
    matrix: ComplexMatrix,
}

impl KossakowskiMatrix {
    pub fn new(coeffs: &BathCoefficients) -> Self {
        let mut m = ComplexMatrix::zeros(3);
        m.set(0, 0, C64::new(coeffs.a(), 0.0));
        m.set(1, 1, C64::new(coeffs.a(), 0.0));
        m.set(0, 1, C64::new(0.0, -coeffs.b()));
        m.set(1, 0, C64::new(0.0, coeffs.b()));
        Self { matrix: m }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix.get(i, j)
    }
}

fn pauli_matrices() -> [Matrix2<C64>; 3] {
    let o = C64::ZERO;
    let one = C64::ONE;
    let i = C64::I;
    [
        Matrix2::new(o, one, one, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(one, o, o, -one),
    ]
}

/// The dissipator of the master equation, prepared for repeated application.
///
/// `L[rho] = 1/2 sum_ij S_ij [2 (I x s_j) rho (I x s_i)
///           - (I x s_i)(I x s_j) rho - rho (I x s_i)(I x s_j)]`
///
/// Because every jump operator is `I x s_k`, the sum closes on each 2x2
/// `V`-block, which is how `apply` evaluates it.
#[derive(Clone, Debug)]
pub struct LindbladGenerator {
    s: [[C64; 3]; 3],
    pauli: [Matrix2<C64>; 3],
    /// `sum_ij S_ij s_i s_j`, the anticommutator kernel.
    kernel: Matrix2<C64>,
}

impl LindbladGenerator {
    pub fn new(coeffs: &BathCoefficients) -> Self {
        let k = KossakowskiMatrix::new(coeffs);
        let pauli = pauli_matrices();
        let mut s = [[C64::ZERO; 3]; 3];
        let mut kernel = Matrix2::zeros();
        for i in 0..3 {
            for j in 0..3 {
                s[i][j] = k.entry(i, j);
                kernel += pauli[i] * pauli[j] * s[i][j];
            }
        }
        Self { s, pauli, kernel }
    }

    /// `d rho / d tau` for a 6x6 state; Hermitian and traceless.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != DIM {
            return Err(Error::DimensionMismatch {
                expected: DIM,
                actual: rho.dim(),
            });
        }
        let mut out = DMatrix::zeros(DIM, DIM);
        self.apply_dmatrix(rho.as_dmatrix(), &mut out);
        Ok(ComplexMatrix::from(out))
    }

    fn dissipate_block(&self, m: &Matrix2<C64>) -> Matrix2<C64> {
        let mut out = Matrix2::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let s = self.s[i][j];
                if s == C64::ZERO {
                    continue;
                }
                out += self.pauli[j] * m * self.pauli[i] * s;
            }
        }
        out -= (self.kernel * m + m * self.kernel) * C64::new(0.5, 0.0);
        out
    }

    fn apply_dmatrix(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        for bu in 0..3 {
            for bv in 0..3 {
                let (r, c) = (2 * bu, 2 * bv);
                let block = Matrix2::new(
                    rho[(r, c)],
                    rho[(r, c + 1)],
                    rho[(r + 1, c)],
                    rho[(r + 1, c + 1)],
                );
                let d = self.dissipate_block(&block);
                out[(r, c)] = d[(0, 0)];
                out[(r, c + 1)] = d[(0, 1)];
                out[(r + 1, c)] = d[(1, 0)];
                out[(r + 1, c + 1)] = d[(1, 1)];
            }
        }
    }
}

/// Right-hand side of the master equation, `d rho / d tau`.
pub fn lindblad_rhs(rho: &DensityMatrix, coeffs: &BathCoefficients) -> Result<ComplexMatrix> {
    LindbladGenerator::new(coeffs).apply(rho.matrix())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    Rk4Fixed,
    Rk45Adaptive,
}

/// Time grid and integrator selection for [`evolve_numeric`].
#[derive(Clone, Copy, Debug)]
pub struct EvolutionConfig {
    tau_max: f64,
    steps: usize,
    integrator: Integrator,
    abs_tol: f64,
    rel_tol: f64,
}

impl EvolutionConfig {
    pub fn rk4(tau_max: f64, steps: usize) -> Result<Self> {
        if !tau_max.is_finite() || tau_max <= 0.0 {
            return Err(Error::invalid(
                "tau_max",
                format!("must be positive, got {tau_max}"),
            ));
        }
        if steps == 0 {
            return Err(Error::invalid("steps", "must be at least 1"));
        }
        Ok(Self {
            tau_max,
            steps,
            integrator: Integrator::Rk4Fixed,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
        })
    }

    /// RK4 with the default resolution policy `4 A dt <= RK4_STEP_BUDGET`.
    pub fn rk4_with_policy(tau_max: f64, coeffs: &BathCoefficients) -> Result<Self> {
        Self::rk4(tau_max, rk4_policy_steps(tau_max, coeffs))
    }

    pub fn rk45(tau_max: f64, steps: usize, abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let mut cfg = Self::rk4(tau_max, steps)?;
        if abs_tol.is_nan() || abs_tol <= 0.0 || rel_tol.is_nan() || rel_tol <= 0.0 {
            return Err(Error::invalid(
                "tolerance",
                format!("abs_tol and rel_tol must be positive, got {abs_tol}, {rel_tol}"),
            ));
        }
        cfg.integrator = Integrator::Rk45Adaptive;
        cfg.abs_tol = abs_tol;
        cfg.rel_tol = rel_tol;
        Ok(cfg)
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn integrator(&self) -> Integrator {
        self.integrator
    }

    /// Grid time of index `k`, for `k` in `0..=steps`.
    pub fn tau_at(&self, k: usize) -> f64 {
        self.tau_max * k as f64 / self.steps as f64
    }
}

/// Number of RK4 steps satisfying the resolution policy over `[0, tau_max]`.
pub fn rk4_policy_steps(tau_max: f64, coeffs: &BathCoefficients) -> usize {
    ((4.0 * coeffs.a() * tau_max / RK4_STEP_BUDGET).ceil() as usize).max(1)
}

/// Time after which the slowest transient `e^{-4 A tau}` is below `e^{-40}`.
pub fn equilibrium_tau(coeffs: &BathCoefficients) -> f64 {
    EQUILIBRIUM_DECAY_EXPONENT / (4.0 * coeffs.a())
}

/// States on the uniform grid `tau_k = k tau_max / steps`, all validated.
#[derive(Clone, Debug)]
pub struct Trajectory {
    taus: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn tau(&self, k: usize) -> f64 {
        self.taus[k]
    }

    pub fn state(&self, k: usize) -> &DensityMatrix {
        &self.states[k]
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.taus.iter().copied().zip(self.states.iter())
    }
}

/// The initial state family of the model; unit trace for every `f`, pure
/// exactly at `f = 0` where it is `(|0,1> + |2,0>)/sqrt(2)`.
pub fn initial_state(family: &InitialFamily) -> Result<DensityMatrix> {
    let f = family.f();
    let half_f = C64::new(f / 2.0, 0.0);
    let half_rest = C64::new((1.0 - 2.0 * f) / 2.0, 0.0);
    let mut m = ComplexMatrix::zeros(DIM);
    for idx in [0, 2, 3, 5] {
        m.set(idx, idx, half_f);
    }
    m.set(1, 1, half_rest);
    m.set(4, 4, half_rest);
    m.set(0, 5, half_f);
    m.set(5, 0, half_f);
    m.set(1, 4, half_rest);
    m.set(4, 1, half_rest);
    DensityMatrix::new(m)
}

/// Equilibrium populations `(K1, K2, K3, K4)` of `rho_inf`.
fn equilibrium_populations(f: f64, a: f64, b: f64) -> [f64; 4] {
    [
        -(a - b) * (f - 1.0) / (4.0 * a),
        -(a + b) * (f - 1.0) / (4.0 * a),
        (a - b) * f / (2.0 * a),
        (a + b) * f / (2.0 * a),
    ]
}

/// Closed-form solution of the master equation for the initial family.
///
/// Populations split into equilibrium plus an `e^{-4 A tau}` transient and
/// the two coherences decay as `e^{-2 A tau}`; writing them that way (rather
/// than with an explicit `e^{+4 A tau}` factor) keeps arbitrarily large `tau`
/// finite.
pub fn evolve_closed_form(
    family: &InitialFamily,
    coeffs: &BathCoefficients,
    tau: f64,
) -> Result<DensityMatrix> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::invalid(
            "tau",
            format!("must be non-negative, got {tau}"),
        ));
    }
    let (f, a, b) = (family.f(), coeffs.a(), coeffs.b());
    let e4 = (-4.0 * a * tau).exp();
    let e2 = (-2.0 * a * tau).exp();
    let k = equilibrium_populations(f, a, b);
    let q = [
        k[0] + e4 * (3.0 * f * a - a + b - b * f) / (4.0 * a),
        k[1] + e4 * (-3.0 * f * a + a - b + b * f) / (4.0 * a),
        k[2] + e4 * b * f / (2.0 * a),
        k[3] - e4 * b * f / (2.0 * a),
        k[0] + e4 * (-3.0 * f * a + a + b - b * f) / (4.0 * a),
        k[1] + e4 * (3.0 * f * a - a - b + b * f) / (4.0 * a),
    ];
    let q7 = C64::new(e2 * f / 2.0, 0.0);
    let q8 = C64::new(e2 * (1.0 - 2.0 * f) / 2.0, 0.0);
    let mut m = ComplexMatrix::from_diagonal(&q);
    m.set(0, 5, q7);
    m.set(5, 0, q7);
    m.set(1, 4, q8);
    m.set(4, 1, q8);
    DensityMatrix::new(m)
}

/// The `tau -> infinity` state `diag(K1, K2, K3, K4, K1, K2)`.
pub fn equilibrium_state(
    family: &InitialFamily,
    coeffs: &BathCoefficients,
) -> Result<DensityMatrix> {
    let k = equilibrium_populations(family.f(), coeffs.a(), coeffs.b());
    let m = ComplexMatrix::from_diagonal(&[k[0], k[1], k[2], k[3], k[0], k[1]]);
    DensityMatrix::new(m)
}

/// Reduced equilibrium state of the qubit, `diag((A-B)/2A, (A+B)/2A)`;
/// independent of the initial family.
pub fn equilibrium_reduced_v(coeffs: &BathCoefficients) -> Result<DensityMatrix> {
    let (a, b) = (coeffs.a(), coeffs.b());
    DensityMatrix::new(ComplexMatrix::from_diagonal(&[
        (a - b) / (2.0 * a),
        (a + b) / (2.0 * a),
    ]))
}

/// Gibbs state of `H = (omega/2) sigma_3` at temperature `T`, in the sigma_3
/// eigenbasis with `|0>` excited: `diag((1 - tanh x)/2, (1 + tanh x)/2)` for
/// `x = omega / 2T`.
pub fn thermal_state_v(omega: f64, temperature: f64) -> Result<DensityMatrix> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::invalid(
            "omega",
            format!("must be positive, got {omega}"),
        ));
    }
    if !temperature.is_finite() || temperature <= 0.0 {
        return Err(Error::invalid(
            "temperature",
            format!("must be positive, got {temperature}"),
        ));
    }
    let x = omega / (2.0 * temperature);
    DensityMatrix::new(ComplexMatrix::from_diagonal(&[
        (1.0 - x.tanh()) / 2.0,
        (1.0 + x.tanh()) / 2.0,
    ]))
}

/// Post-selected weak measurement reversal `M = sqrt(1-p)|0><0| + |1><1|`
/// applied to the qubit factor, with renormalization.
pub fn weak_measurement_reversal(rho: &DensityMatrix, strength: f64) -> Result<DensityMatrix> {
    if rho.dim() != DIM {
        return Err(Error::DimensionMismatch {
            expected: DIM,
            actual: rho.dim(),
        });
    }
    if !(0.0..1.0).contains(&strength) {
        return Err(Error::invalid(
            "strength",
            format!("must lie in [0, 1), got {strength}"),
        ));
    }
    if strength == 0.0 {
        return Ok(rho.clone());
    }
    let mut m = ComplexMatrix::zeros(2);
    m.set(0, 0, C64::new((1.0 - strength).sqrt(), 0.0));
    m.set(1, 1, C64::ONE);
    let lifted = ComplexMatrix::identity(3).tensor_product(&m);
    let filtered = &(&lifted * rho.matrix()) * &lifted.adjoint();
    let norm = filtered.trace().re;
    if norm.is_nan() || norm <= 0.0 {
        return Err(Error::DegeneratePostSelection);
    }
    let scaled = filtered.scale(C64::new(1.0 / norm, 0.0));
    DensityMatrix::with_tolerance(scaled, rho.tolerance())
}

/// Integrates the master equation from `rho0` and returns the state at every
/// grid time `tau_k = k tau_max / steps`, each revalidated as a density
/// matrix. A validation failure aborts with the offending `tau` and the
/// violated invariant.
pub fn evolve_numeric(
    rho0: &DensityMatrix,
    coeffs: &BathCoefficients,
    config: &EvolutionConfig,
) -> Result<Trajectory> {
    if rho0.dim() != DIM {
        return Err(Error::DimensionMismatch {
            expected: DIM,
            actual: rho0.dim(),
        });
    }
    let generator = LindbladGenerator::new(coeffs);
    match config.integrator() {
        Integrator::Rk4Fixed => rk4_fixed(&generator, rho0, config),
        Integrator::Rk45Adaptive => rk45_adaptive(&generator, rho0, config),
    }
}

/// `out = y + sum_i c_i k_i`, elementwise.
fn lincomb(out: &mut DMatrix<C64>, y: &DMatrix<C64>, terms: &[(f64, &DMatrix<C64>)]) {
    let n = out.len();
    for idx in 0..n {
        let mut acc = y.as_slice()[idx];
        for (c, k) in terms {
            acc += k.as_slice()[idx] * *c;
        }
        out.as_mut_slice()[idx] = acc;
    }
}

fn validated(y: &DMatrix<C64>, tau: f64, tolerance: f64) -> Result<DensityMatrix> {
    DensityMatrix::with_tolerance(ComplexMatrix::from(y.clone()), tolerance)
        .map_err(|e| e.at_tau(tau))
}

fn rk4_fixed(
    generator: &LindbladGenerator,
    rho0: &DensityMatrix,
    config: &EvolutionConfig,
) -> Result<Trajectory> {
    let steps = config.steps();
    let h = config.tau_max() / steps as f64;
    let tolerance = rho0.tolerance();

    let mut y = rho0.matrix().as_dmatrix().clone();
    let mut k1 = DMatrix::zeros(DIM, DIM);
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    let mut taus = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    taus.push(0.0);
    states.push(rho0.clone());

    for j in 1..=steps {
        generator.apply_dmatrix(&y, &mut k1);
        lincomb(&mut tmp, &y, &[(h / 2.0, &k1)]);
        generator.apply_dmatrix(&tmp, &mut k2);
        lincomb(&mut tmp, &y, &[(h / 2.0, &k2)]);
        generator.apply_dmatrix(&tmp, &mut k3);
        lincomb(&mut tmp, &y, &[(h, &k3)]);
        generator.apply_dmatrix(&tmp, &mut k4);
        lincomb(
            &mut tmp,
            &y,
            &[
                (h / 6.0, &k1),
                (h / 3.0, &k2),
                (h / 3.0, &k3),
                (h / 6.0, &k4),
            ],
        );
        std::mem::swap(&mut y, &mut tmp);

        let tau = config.tau_at(j);
        states.push(validated(&y, tau, tolerance)?);
        taus.push(tau);
    }
    Ok(Trajectory { taus, states })
}

// Dormand-Prince 5(4) tableau.
const DP_A2: [f64; 1] = [1.0 / 5.0];
const DP_A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const DP_A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const DP_A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const DP_A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const DP_B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// b - b_hat, the embedded error weights (includes the FSAL stage).
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn rk45_adaptive(
    generator: &LindbladGenerator,
    rho0: &DensityMatrix,
    config: &EvolutionConfig,
) -> Result<Trajectory> {
    let steps = config.steps();
    let tolerance = rho0.tolerance();
    let (abs_tol, rel_tol) = (config.abs_tol, config.rel_tol);

    let mut y = rho0.matrix().as_dmatrix().clone();
    let mut k: Vec<DMatrix<C64>> = (0..7).map(|_| DMatrix::zeros(DIM, DIM)).collect();
    let mut ynew = y.clone();
    let mut tmp = y.clone();

    let mut taus = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    taus.push(0.0);
    states.push(rho0.clone());

    let grid_h = config.tau_max() / steps as f64;
    let min_h = config.tau_max() * 1e-14;
    let mut h = grid_h;
    let mut t = 0.0;
    let mut evals: usize = 0;
    const MAX_EVALS: usize = 50_000_000;

    generator.apply_dmatrix(&y, &mut k[0]);

    for j in 1..=steps {
        let target = config.tau_at(j);
        // the min_h guard keeps round-off in `t += clamped` from spinning
        // on the last sliver before a grid boundary
        while target - t > min_h {
            let clamped = h.min(target - t);
            // stages 2..=6
            lincomb(&mut tmp, &y, &[(clamped * DP_A2[0], &k[0])]);
            generator.apply_dmatrix(&tmp, &mut k[1]);
            lincomb(
                &mut tmp,
                &y,
                &[(clamped * DP_A3[0], &k[0]), (clamped * DP_A3[1], &k[1])],
            );
            generator.apply_dmatrix(&tmp, &mut k[2]);
            lincomb(
                &mut tmp,
                &y,
                &[
                    (clamped * DP_A4[0], &k[0]),
                    (clamped * DP_A4[1], &k[1]),
                    (clamped * DP_A4[2], &k[2]),
                ],
            );
            generator.apply_dmatrix(&tmp, &mut k[3]);
            lincomb(
                &mut tmp,
                &y,
                &[
                    (clamped * DP_A5[0], &k[0]),
                    (clamped * DP_A5[1], &k[1]),
                    (clamped * DP_A5[2], &k[2]),
                    (clamped * DP_A5[3], &k[3]),
                ],
            );
            generator.apply_dmatrix(&tmp, &mut k[4]);
            lincomb(
                &mut tmp,
                &y,
                &[
                    (clamped * DP_A6[0], &k[0]),
                    (clamped * DP_A6[1], &k[1]),
                    (clamped * DP_A6[2], &k[2]),
                    (clamped * DP_A6[3], &k[3]),
                    (clamped * DP_A6[4], &k[4]),
                ],
            );
            generator.apply_dmatrix(&tmp, &mut k[5]);
            lincomb(
                &mut ynew,
                &y,
                &[
                    (clamped * DP_B[0], &k[0]),
                    (clamped * DP_B[2], &k[2]),
                    (clamped * DP_B[3], &k[3]),
                    (clamped * DP_B[4], &k[4]),
                    (clamped * DP_B[5], &k[5]),
                ],
            );
            generator.apply_dmatrix(&ynew, &mut k[6]);
            evals += 6;
            if evals > MAX_EVALS {
                return Err(
                    Error::invalid("rk45", format!("step budget exhausted at tau = {t}")).at_tau(t),
                );
            }

            // per-component error ratio against abs/rel tolerances
            let mut ratio: f64 = 0.0;
            for idx in 0..y.len() {
                let mut err = C64::ZERO;
                for (stage, weight) in DP_E.iter().enumerate() {
                    if *weight != 0.0 {
                        err += k[stage].as_slice()[idx] * (clamped * *weight);
                    }
                }
                let scale =
                    abs_tol + rel_tol * y.as_slice()[idx].norm().max(ynew.as_slice()[idx].norm());
                ratio = ratio.max(err.norm() / scale);
            }

            if ratio <= 1.0 {
                t += clamped;
                std::mem::swap(&mut y, &mut ynew);
                let (a, b) = k.split_at_mut(6);
                a[0].copy_from(&b[0]);
            }
            let factor = if ratio > 0.0 {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h = (clamped * factor).max(min_h);
            if h <= min_h && ratio > 1.0 {
                return Err(
                    Error::invalid("rk45", format!("step size underflow at tau = {t}")).at_tau(t),
                );
            }
        }
        states.push(validated(&y, target, tolerance)?);
        taus.push(target);
        t = target;
    }
    Ok(Trajectory { taus, states })
}
