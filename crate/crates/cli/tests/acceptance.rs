//! Acceptance suite. Each test checks one numbered criterion at its stated
//! tolerance and prints a single `criterion N ... PASS/FAIL` line (visible
//! with `--nocapture`). Criteria 1, 2, 4, 6 and 7 share one evaluation of
//! the full parameter grid, computed lazily on first use.

use std::process::Command;
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use eursim::Complex64 as C64;
use eursim::{
    bath_coefficients, equilibrium_reduced_v, equilibrium_tau, evolve_closed_form, evolve_numeric,
    initial_state, mixedness, mixedness_closed_form, negativity, post_measurement_state,
    qutrit_sigma_x, qutrit_sigma_z, rk4_policy_steps, thermal_state_v, BathCoefficients,
    BathParams, ComplexMatrix, DensityMatrix, EvolutionConfig, InitialFamily, UncertaintyReport,
    Vacuum,
};
use eursim_cli::config::{PartialConfig, Preset};
use eursim_cli::sweep::run_sweep;

const GRID_F: [f64; 4] = [0.0, 0.1, 0.2, 1.0 / 3.0];
const GRID_T: [f64; 3] = [0.1, 0.2, 0.4];
const GRID_ALPHA: [Option<f64>; 4] = [Some(-0.5), Some(-1.0), Some(-2.0), None];
const GRID_OMEGA: [f64; 3] = [0.1, 1.0, 2.0];
const TAU_SAMPLES: usize = 20;

fn vacuum(alpha: Option<f64>) -> Vacuum {
    alpha.map_or(Vacuum::BunchDavies, Vacuum::Alpha)
}

fn alpha_label(alpha: Option<f64>) -> String {
    alpha.map_or_else(|| "BD".to_string(), |a| a.to_string())
}

struct ComboResult {
    f: f64,
    temperature: f64,
    alpha: Option<f64>,
    omega: f64,
    coeffs: BathCoefficients,
    taus: Vec<f64>,
    numeric: Vec<DensityMatrix>,
    closed: Vec<DensityMatrix>,
    oracle_error: f64,
}

struct GridEvaluation {
    combos: Vec<ComboResult>,
    runtime: Duration,
}

static GRID: LazyLock<GridEvaluation> = LazyLock::new(|| {
    let mut specs = Vec::new();
    for &f in &GRID_F {
        for &temperature in &GRID_T {
            for &alpha in &GRID_ALPHA {
                for &omega in &GRID_OMEGA {
                    specs.push((f, temperature, alpha, omega));
                }
            }
        }
    }
    let start = Instant::now();
    let combos: Vec<ComboResult> = specs
        .par_iter()
        .map(|&(f, temperature, alpha, omega)| {
            let family = InitialFamily::new(f).unwrap();
            let params = BathParams::new(omega, temperature, vacuum(alpha)).unwrap();
            let coeffs = bath_coefficients(&params).unwrap();
            let tau_max = 10.0 / coeffs.a();
            let taus: Vec<f64> = (0..TAU_SAMPLES)
                .map(|k| tau_max * k as f64 / (TAU_SAMPLES - 1) as f64)
                .collect();

            let intervals = TAU_SAMPLES - 1;
            let stride = rk4_policy_steps(tau_max, &coeffs).div_ceil(intervals);
            let config = EvolutionConfig::rk4(tau_max, stride * intervals).unwrap();
            let trajectory =
                evolve_numeric(&initial_state(&family).unwrap(), &coeffs, &config).unwrap();

            let numeric: Vec<DensityMatrix> = (0..TAU_SAMPLES)
                .map(|k| trajectory.state(k * stride).clone())
                .collect();
            let closed: Vec<DensityMatrix> = taus
                .iter()
                .map(|&tau| evolve_closed_form(&family, &coeffs, tau).unwrap())
                .collect();
            let oracle_error = numeric
                .iter()
                .zip(&closed)
                .map(|(n, c)| n.matrix().max_abs_diff(c.matrix()))
                .fold(0.0, f64::max);
            ComboResult {
                f,
                temperature,
                alpha,
                omega,
                coeffs,
                taus,
                numeric,
                closed,
                oracle_error,
            }
        })
        .collect();
    GridEvaluation {
        combos,
        runtime: start.elapsed(),
    }
});

fn verdict(number: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number} ({name}): {status} - {detail}");
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_oracle_equivalence() {
    let grid = &*GRID;
    let worst = grid
        .combos
        .iter()
        .max_by(|a, b| a.oracle_error.total_cmp(&b.oracle_error))
        .unwrap();
    let detail = format!(
        "max |numeric - closed form| = {:.3e} over {} trajectories x {} times, worst at \
         (f={}, T={}, alpha={}, omega={}) (tolerance 1e-8); grid evaluation took {:.2} s \
         (target < 10 s)",
        worst.oracle_error,
        grid.combos.len(),
        TAU_SAMPLES,
        worst.f,
        worst.temperature,
        alpha_label(worst.alpha),
        worst.omega,
        grid.runtime.as_secs_f64()
    );
    verdict(1, "oracle equivalence", worst.oracle_error <= 1e-8, &detail);
}

#[test]
fn criterion_02_uncertainty_relation() {
    let grid = &*GRID;
    let mut min_slack = f64::INFINITY;
    for combo in &grid.combos {
        for states in [&combo.numeric, &combo.closed] {
            for (k, state) in states.iter().enumerate() {
                let report = UncertaintyReport::from_state(combo.taus[k], state).unwrap();
                min_slack = min_slack.min(report.l - report.r);
            }
        }
    }
    let detail = format!(
        "min(L - R) = {min_slack:.3e} over every grid state, numeric and closed form \
         (tolerance -1e-9)"
    );
    verdict(2, "uncertainty relation", min_slack >= -1e-9, &detail);
}

#[test]
fn criterion_03_saturation_value() {
    let mut worst: f64 = 0.0;
    for &t in &[0.1, 0.2, 0.3, 0.4] {
        let family = InitialFamily::new(0.0).unwrap();
        let params = BathParams::new(1.0, t, Vacuum::Alpha(-1.0)).unwrap();
        let coeffs = bath_coefficients(&params).unwrap();
        let state = evolve_closed_form(&family, &coeffs, equilibrium_tau(&coeffs)).unwrap();
        let report = UncertaintyReport::from_state(0.0, &state).unwrap();
        worst = worst.max((report.l - 2.5).abs());
    }
    let detail =
        format!("max |L(tau_eq) - 2.5| = {worst:.3e} over T in {{0.1..0.4}} (tolerance 1e-3)");
    verdict(3, "saturation value", worst <= 1e-3, &detail);
}

#[test]
fn criterion_04_entanglement_death() {
    let grid = &*GRID;
    let mut worst: f64 = 0.0;
    for combo in &grid.combos {
        let family = InitialFamily::new(combo.f).unwrap();
        let state =
            evolve_closed_form(&family, &combo.coeffs, equilibrium_tau(&combo.coeffs)).unwrap();
        worst = worst.max(negativity(&state).unwrap());
        // the numeric endpoint sits at tau_max = 10/A = tau_eq as well
        worst = worst.max(negativity(combo.numeric.last().unwrap()).unwrap());
    }
    let detail = format!(
        "max negativity at tau_eq = {worst:.3e} over {} grid points (tolerance 1e-6)",
        grid.combos.len()
    );
    verdict(4, "entanglement death", worst < 1e-6, &detail);
}

#[test]
fn criterion_05_thermalization_limit() {
    let mut bd_worst: f64 = 0.0;
    let mut alpha_min_gap = f64::INFINITY;
    for &omega in &GRID_OMEGA {
        for &t in &GRID_T {
            let thermal = thermal_state_v(omega, t).unwrap();
            let bd = equilibrium_reduced_v(
                &bath_coefficients(&BathParams::new(omega, t, Vacuum::BunchDavies).unwrap())
                    .unwrap(),
            )
            .unwrap();
            bd_worst = bd_worst.max(bd.matrix().max_abs_diff(thermal.matrix()));

            let alpha = equilibrium_reduced_v(
                &bath_coefficients(&BathParams::new(omega, t, Vacuum::Alpha(-1.0)).unwrap())
                    .unwrap(),
            )
            .unwrap();
            alpha_min_gap = alpha_min_gap.min(alpha.matrix().max_abs_diff(thermal.matrix()));
        }
    }
    let detail = format!(
        "Bunch-Davies max gap to the Gibbs state = {bd_worst:.3e} (tolerance 1e-12); \
         alpha = -1 min gap = {alpha_min_gap:.3e} (must exceed 1e-6)"
    );
    verdict(
        5,
        "thermalization limit",
        bd_worst <= 1e-12 && alpha_min_gap > 1e-6,
        &detail,
    );
}

#[test]
fn criterion_06_mixedness_consistency() {
    let grid = &*GRID;
    let mut worst: f64 = 0.0;
    let mut worst_collapse: f64 = 0.0;
    for combo in &grid.combos {
        let family = InitialFamily::new(combo.f).unwrap();
        for (k, state) in combo.closed.iter().enumerate() {
            let direct = mixedness(state);
            let closed = mixedness_closed_form(&family, &combo.coeffs, combo.taus[k]);
            worst = worst.max((direct - closed).abs());
        }
        let at_zero = mixedness_closed_form(&family, &combo.coeffs, 0.0);
        let collapse = 4.8 * combo.f - 6.6 * combo.f * combo.f;
        worst_collapse = worst_collapse.max((at_zero - collapse).abs());
    }
    let detail = format!(
        "max |closed-form X - (6/5)(1 - Tr rho^2)| = {worst:.3e} (tolerance 1e-10); \
         max |X(0) - (4.8f - 6.6f^2)| = {worst_collapse:.3e}"
    );
    verdict(
        6,
        "mixedness consistency",
        worst <= 1e-10 && worst_collapse <= 1e-12,
        &detail,
    );
}

/// Reference populations and coherences of the closed-form trajectory,
/// arranged with an explicit `e^{4 A tau}` factor; an independent route from
/// the library's transient/equilibrium split.
fn reference_q(f: f64, a: f64, b: f64, tau: f64) -> [f64; 8] {
    let e4 = (-4.0 * a * tau).exp();
    let e4p = (4.0 * a * tau).exp();
    let e2 = (-2.0 * a * tau).exp();
    [
        e4 * (3.0 * f * a - a + b - (a - b) * e4p * (f - 1.0) - b * f) / (4.0 * a),
        e4 * (-3.0 * f * a + a - b - (a + b) * e4p * (f - 1.0) + b * f) / (4.0 * a),
        (a - b + b * e4) * f / (2.0 * a),
        (a - b * e4 + b) * f / (2.0 * a),
        e4 * (-3.0 * f * a + a + b - (a - b) * e4p * (f - 1.0) - b * f) / (4.0 * a),
        e4 * (3.0 * f * a - a - b - (a + b) * e4p * (f - 1.0) + b * f) / (4.0 * a),
        e2 * f / 2.0,
        e2 * (1.0 - 2.0 * f) / 2.0,
    ]
}

/// Reference sigma_x post-measurement state (the 1/4-scaled F matrix),
/// again with explicit `e^{4 A tau}` factors.
fn reference_f_matrix(f: f64, a: f64, b: f64, tau: f64) -> ComplexMatrix {
    let e4 = (-4.0 * a * tau).exp();
    let e4p = (4.0 * a * tau).exp();
    let e2 = (-2.0 * a * tau).exp();
    let f1 = e4 * ((b - a) * e4p - b) * (f - 3.0) / (4.0 * a);
    let f2 = 0.25 * e2 * (f - 1.0);
    let f3 = e4 * (e4p * (a - b) + b) * (3.0 * f - 1.0) / (4.0 * a);
    let f4 = -0.75 * e2 * (f - 1.0);
    let f5 = e4 * (b - (a + b) * e4p) * (f - 3.0) / (4.0 * a);
    let f6 = e4 * ((a + b) * e4p - b) * (3.0 * f - 1.0) / (4.0 * a);
    let f7 = e4 * (e4p * (a - b) + b) * (f + 1.0) / (2.0 * a);
    let f8 = -0.5 * e2 * (f - 1.0);
    let f9 = e4 * ((a + b) * e4p - b) * (f + 1.0) / (2.0 * a);
    let entries: [[f64; 6]; 6] = [
        [f1, f2, 0.0, 0.0, f3, f4],
        [f2, f5, 0.0, 0.0, f4, f6],
        [0.0, 0.0, f7, f8, 0.0, 0.0],
        [0.0, 0.0, f8, f9, 0.0, 0.0],
        [f3, f4, 0.0, 0.0, f1, f2],
        [f4, f6, 0.0, 0.0, f2, f5],
    ];
    ComplexMatrix::from_fn(6, |i, j| C64::new(entries[i][j] / 4.0, 0.0))
}

#[test]
fn criterion_07_post_measurement_closed_forms() {
    let grid = &*GRID;
    let sigma_z = qutrit_sigma_z();
    let sigma_x = qutrit_sigma_x();
    let mut z_exact = true;
    let mut q_worst: f64 = 0.0;
    let mut x_worst: f64 = 0.0;
    for combo in &grid.combos {
        let (a, b) = (combo.coeffs.a(), combo.coeffs.b());
        for (k, state) in combo.closed.iter().enumerate() {
            let q = reference_q(combo.f, a, b, combo.taus[k]);

            // sigma_z dephasing: exactly the diagonal of the evolved state
            let dephased = post_measurement_state(state, &sigma_z).unwrap();
            for (i, q_i) in q.iter().take(6).enumerate() {
                for j in 0..6 {
                    let want = if i == j { state.get(i, i) } else { C64::ZERO };
                    if dephased.get(i, j) != want {
                        z_exact = false;
                    }
                }
                q_worst = q_worst.max((state.get(i, i).re - q_i).abs());
            }

            // sigma_x dephasing against the reference F matrix over 4
            let measured = post_measurement_state(state, &sigma_x).unwrap();
            let reference = reference_f_matrix(combo.f, a, b, combo.taus[k]);
            x_worst = x_worst.max(measured.matrix().max_abs_diff(&reference));
        }
    }
    let detail = format!(
        "sigma_z dephasing bit-exact against diag(Q): {z_exact}; \
         max |diag - reference Q| = {q_worst:.3e}; \
         max |sigma_x dephasing - reference F/4| = {x_worst:.3e} (tolerance 1e-12)"
    );
    verdict(
        7,
        "post-measurement closed forms",
        z_exact && q_worst <= 1e-12 && x_worst <= 1e-12,
        &detail,
    );
}

#[test]
fn criterion_08_wmr_steering() {
    // Fig. 5 parameters via the actual sweep path: f = 0, T = 0.2,
    // alpha = -1, omega = 0.1, p in {0, 0.3, 0.6, 0.9}, default tau grid.
    let cfg = PartialConfig {
        preset: Some(Preset::Fig5),
        ..PartialConfig::default()
    }
    .resolve()
    .unwrap();
    let rows = run_sweep(&cfg).unwrap();

    let ps = [0.0, 0.3, 0.6, 0.9];
    let curves: Vec<Vec<f64>> = ps
        .iter()
        .map(|&p| {
            let mut curve: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.p == p)
                .map(|r| (r.tau, r.l))
                .collect();
            curve.sort_by(|x, y| x.0.total_cmp(&y.0));
            curve.into_iter().map(|(_, l)| l).collect()
        })
        .collect();
    let n_tau = curves[0].len();
    let taus: Vec<f64> = {
        let mut t: Vec<f64> = rows.iter().filter(|r| r.p == 0.0).map(|r| r.tau).collect();
        t.sort_by(f64::total_cmp);
        t
    };

    let mut violations = Vec::new();
    for (k, _) in taus.iter().enumerate() {
        for pair in 0..3 {
            if curves[pair + 1][k] > curves[pair][k] + 1e-9 {
                violations.push((k, ps[pair], ps[pair + 1]));
            }
        }
    }
    let first_ordered = violations.iter().map(|v| v.0).max().map_or(0, |k| k + 1);

    println!(
        "criterion 8 diagnostics: L(p) at tau=0 = {:?} (increasing in p);",
        ps.iter()
            .enumerate()
            .map(|(i, _)| (curves[i][0] * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );
    println!(
        "criterion 8 diagnostics: ordering L(p_i+1) <= L(p_i) holds from grid index \
         {first_ordered} (tau = {:.2}) through tau_max = {:.2}; at tau_max L(p) = {:?}",
        taus.get(first_ordered).copied().unwrap_or(f64::NAN),
        taus[n_tau - 1],
        ps.iter()
            .enumerate()
            .map(|(i, _)| (curves[i][n_tau - 1] * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );

    let detail = format!(
        "L(p, tau) non-increasing in p at every sampled tau: {} violations out of {} \
         grid times x 3 adjacent pairs (order tolerance 1e-9). The steering claim holds \
         for tau beyond the entanglement-death transient (grid index >= {first_ordered}), \
         but the post-selection initially *raises* L: at tau = 0 the filtered state is \
         less entangled with the memory, so L(p) is increasing there, which the exact \
         tau = 0 filtered state confirms in closed form.",
        violations.len(),
        n_tau * 3,
    );
    verdict(8, "wmr steering", violations.is_empty(), &detail);
}

#[test]
fn criterion_09_short_time_temperature_monotonicity() {
    let family = InitialFamily::new(0.0).unwrap();
    let mut ls = Vec::new();
    let mut ns = Vec::new();
    for &t in &[0.1, 0.2, 0.3, 0.4] {
        let params = BathParams::new(1.0, t, Vacuum::Alpha(-1.0)).unwrap();
        let coeffs = bath_coefficients(&params).unwrap();
        let state = evolve_closed_form(&family, &coeffs, 1.0).unwrap();
        let report = UncertaintyReport::from_state(1.0, &state).unwrap();
        ls.push(report.l);
        ns.push(report.negativity);
    }
    let l_increasing = ls.windows(2).all(|w| w[1] > w[0] + 1e-9);
    let n_decreasing = ns.windows(2).all(|w| w[1] < w[0] - 1e-9);
    let detail = format!(
        "at tau = 1: L = {:?} increasing in T: {l_increasing}; \
         negativity = {:?} decreasing in T: {n_decreasing}",
        ls.iter()
            .map(|x| (x * 1e4).round() / 1e4)
            .collect::<Vec<_>>(),
        ns.iter()
            .map(|x| (x * 1e4).round() / 1e4)
            .collect::<Vec<_>>(),
    );
    verdict(
        9,
        "short-time temperature monotonicity",
        l_increasing && n_decreasing,
        &detail,
    );
}

#[test]
fn criterion_10_determinism() {
    let run = |extra: &[&str]| -> Vec<u8> {
        let out = Command::new(env!("CARGO_BIN_EXE_eursim"))
            .args(["sweep", "--preset", "fig1"])
            .args(extra)
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let reference = run(&[]);
    let repeats_identical = (0..2).all(|_| run(&[]) == reference);
    let threads_identical =
        run(&["--threads", "1"]) == reference && run(&["--threads", "4"]) == reference;
    let detail = format!(
        "fig1 sweep ({} bytes): 3 repeated runs identical: {repeats_identical}; \
         1-thread and 4-thread runs identical: {threads_identical}",
        reference.len()
    );
    verdict(
        10,
        "determinism",
        repeats_identical && threads_identical,
        &detail,
    );
}
