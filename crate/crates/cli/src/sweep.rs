//! Grid expansion and execution. Grid points are independent, so they run on
//! a worker pool; a final sort restores the canonical row order regardless of
//! scheduling.

use rayon::prelude::*;

use eursim::{
    bath_coefficients, evolve_closed_form, evolve_numeric, initial_state, rk4_policy_steps,
    weak_measurement_reversal, BathCoefficients, BathParams, DensityMatrix, EvolutionConfig,
    InitialFamily, Trajectory, UncertaintyReport,
};

use crate::config::{AlphaSpec, IntegratorArg, RunConfig};
use crate::error::CliError;
use crate::output::{sort_rows, ResultRow};

/// One point of the parameter grid (everything except tau).
#[derive(Clone, Copy, Debug)]
pub struct GridPoint {
    pub f: f64,
    pub temperature: f64,
    pub alpha: AlphaSpec,
    pub omega: f64,
    pub p: f64,
}

impl GridPoint {
    fn label(&self) -> String {
        format!(
            "f={}, T={}, alpha={}, omega={}, p={}",
            self.f,
            self.temperature,
            self.alpha.csv_label(),
            self.omega,
            self.p
        )
    }

    pub fn bath_params(&self) -> Result<BathParams, CliError> {
        BathParams::new(self.omega, self.temperature, self.alpha.to_vacuum())
            .map_err(|e| CliError::Numeric(format!("at grid point {}: {e}", self.label())))
    }

    pub fn coefficients(&self) -> Result<BathCoefficients, CliError> {
        bath_coefficients(&self.bath_params()?)
            .map_err(|e| CliError::Numeric(format!("at grid point {}: {e}", self.label())))
    }
}

pub fn expand_grid(cfg: &RunConfig) -> Vec<GridPoint> {
    let mut points = Vec::new();
    for &f in &cfg.f {
        for &temperature in &cfg.temperature {
            for &alpha in &cfg.alpha {
                for &omega in &cfg.omega {
                    for &p in &cfg.p {
                        points.push(GridPoint {
                            f,
                            temperature,
                            alpha,
                            omega,
                            p,
                        });
                    }
                }
            }
        }
    }
    points
}

/// The uniform tau grid: explicit `tau-max` if given, otherwise
/// `10 / (4 A_min)` over the swept baths so every curve visibly saturates.
pub fn tau_grid(cfg: &RunConfig, points: &[GridPoint]) -> Result<Vec<f64>, CliError> {
    let tau_max = match cfg.tau_max {
        Some(t) => t,
        None => {
            let mut a_min = f64::INFINITY;
            for pt in points {
                a_min = a_min.min(pt.coefficients()?.a());
            }
            10.0 / (4.0 * a_min)
        }
    };
    let n = cfg.tau_points;
    Ok((0..n)
        .map(|k| tau_max * k as f64 / (n - 1) as f64)
        .collect())
}

/// Runs one grid point over the whole tau grid.
///
/// The closed form solves the master equation exactly for the unfiltered
/// initial family, so it is used whenever `p = 0`; a filtered initial state
/// leaves that family and is integrated numerically, with the step count
/// aligned to the tau grid so samples land exactly on grid times.
pub fn measure_point(
    point: &GridPoint,
    taus: &[f64],
    cfg: &RunConfig,
) -> Result<Vec<ResultRow>, CliError> {
    let numeric =
        |e: eursim::Error| CliError::Numeric(format!("at grid point {}: {e}", point.label()));
    let coeffs = point.coefficients()?;
    let family = InitialFamily::new(point.f).map_err(numeric)?;

    let mut rows = Vec::with_capacity(taus.len());
    let mut push_row = |tau: f64, state: &DensityMatrix| -> Result<(), CliError> {
        let report = UncertaintyReport::from_state(tau, state).map_err(numeric)?;
        rows.push(ResultRow {
            f: point.f,
            temperature: point.temperature,
            alpha: point.alpha,
            omega: point.omega,
            p: point.p,
            tau,
            l: report.l,
            r: report.r,
            negativity: report.negativity,
            mixedness: report.mixedness,
            purity: report.purity,
        });
        Ok(())
    };

    if point.p == 0.0 {
        for &tau in taus {
            let state = evolve_closed_form(&family, &coeffs, tau).map_err(numeric)?;
            push_row(tau, &state)?;
        }
    } else {
        let rho0 = initial_state(&family).map_err(numeric)?;
        let filtered = weak_measurement_reversal(&rho0, point.p).map_err(numeric)?;
        let (traj, stride) = evolve_on_grid(&filtered, &coeffs, taus, cfg).map_err(numeric)?;
        for (k, &tau) in taus.iter().enumerate() {
            push_row(tau, traj.state(k * stride))?;
        }
    }
    Ok(rows)
}

/// Integrates so that every tau-grid time sits on a step boundary; returns
/// the trajectory and the index stride between grid times.
pub fn evolve_on_grid(
    rho0: &DensityMatrix,
    coeffs: &BathCoefficients,
    taus: &[f64],
    cfg: &RunConfig,
) -> eursim::Result<(Trajectory, usize)> {
    let tau_max = *taus.last().expect("tau grid is non-empty");
    let intervals = taus.len() - 1;
    let (config, stride) = match cfg.integrator {
        IntegratorArg::Rk4 => {
            let per_interval = rk4_policy_steps(tau_max, coeffs).div_ceil(intervals);
            (
                EvolutionConfig::rk4(tau_max, per_interval * intervals)?,
                per_interval,
            )
        }
        IntegratorArg::Rk45 => (
            EvolutionConfig::rk45(tau_max, intervals, cfg.abs_tol, cfg.rel_tol)?,
            1,
        ),
    };
    Ok((evolve_numeric(rho0, coeffs, &config)?, stride))
}

/// Expands, evaluates (in parallel when a pool is configured) and sorts.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<ResultRow>, CliError> {
    let points = expand_grid(cfg);
    let taus = tau_grid(cfg, &points)?;
    let run = || {
        points
            .par_iter()
            .map(|pt| measure_point(pt, &taus, cfg))
            .collect::<Result<Vec<_>, CliError>>()
    };
    let nested = match cfg.threads {
        None => run(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Numeric(format!("thread pool: {e}")))?
            .install(run),
    }?;
    let mut rows: Vec<ResultRow> = nested.into_iter().flatten().collect();
    sort_rows(&mut rows);
    Ok(rows)
}
