//! Sweep configuration: flag values, flat key-value config files, figure
//! presets, and the merge precedence flags > file > preset > defaults.

use std::path::{Path, PathBuf};

use eursim::{BathParams, InitialFamily, Vacuum};

use crate::error::CliError;
use crate::output::fmt_sig12;

pub const DEFAULT_TAU_POINTS: usize = 200;
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// An alpha-vacuum selector; `BD` on the command line spells the
/// Bunch-Davies (alpha -> -infinity) limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaSpec {
    BunchDavies,
    Value(f64),
}

impl AlphaSpec {
    pub fn parse(token: &str) -> Result<Self, CliError> {
        let token = token.trim();
        if token.eq_ignore_ascii_case("bd") {
            return Ok(AlphaSpec::BunchDavies);
        }
        let value: f64 = token.parse().map_err(|_| {
            CliError::usage(format!("alpha: expected a number or `BD`, got `{token}`"))
        })?;
        Ok(AlphaSpec::Value(value))
    }

    pub fn to_vacuum(self) -> Vacuum {
        match self {
            AlphaSpec::BunchDavies => Vacuum::BunchDavies,
            AlphaSpec::Value(v) => Vacuum::Alpha(v),
        }
    }

    pub fn csv_label(&self) -> String {
        match self {
            AlphaSpec::BunchDavies => "BD".to_string(),
            AlphaSpec::Value(v) => fmt_sig12(*v),
        }
    }

    /// Bunch-Davies is the alpha -> -infinity limit, so it sorts first.
    pub fn sort_key(&self) -> f64 {
        match self {
            AlphaSpec::BunchDavies => f64::NEG_INFINITY,
            AlphaSpec::Value(v) => *v,
        }
    }
}

/// Integrator selection exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum IntegratorArg {
    Rk4,
    Rk45,
}

/// The figure presets. Captions fix the scalar parameters; where a caption
/// does not list the swept values (fig1 temperatures, fig3 initial states,
/// fig5 strengths) the lists below are this tool's documented defaults and
/// remain overridable by flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Preset {
    pub fn parse(token: &str) -> Result<Self, CliError> {
        match token.trim().to_ascii_lowercase().as_str() {
            "fig1" => Ok(Preset::Fig1),
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            other => Err(CliError::usage(format!(
                "preset: expected one of fig1..fig5, got `{other}`"
            ))),
        }
    }

    fn partial(self) -> PartialConfig {
        let (f, temperature, omega, p) = match self {
            Preset::Fig1 => (vec![0.0], vec![0.1, 0.2, 0.3, 0.4], vec![1.0], vec![0.0]),
            Preset::Fig2 => (vec![0.0], vec![0.1], vec![1.0], vec![0.0]),
            Preset::Fig3 => (
                vec![0.0, 0.1, 0.2, 1.0 / 3.0],
                vec![0.2],
                vec![0.1],
                vec![0.0],
            ),
            Preset::Fig4 => (vec![0.1], vec![0.2], vec![0.1], vec![0.0]),
            Preset::Fig5 => (vec![0.0], vec![0.2], vec![0.1], vec![0.0, 0.3, 0.6, 0.9]),
        };
        PartialConfig {
            f: Some(f),
            temperature: Some(temperature),
            alpha: Some(vec![AlphaSpec::Value(-1.0)]),
            omega: Some(omega),
            p: Some(p),
            ..PartialConfig::default()
        }
    }
}

/// A not-yet-validated configuration layer; `None` means "not specified at
/// this layer".
#[derive(Clone, Debug, Default)]
pub struct PartialConfig {
    pub f: Option<Vec<f64>>,
    pub temperature: Option<Vec<f64>>,
    pub alpha: Option<Vec<AlphaSpec>>,
    pub omega: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub tau_max: Option<f64>,
    pub tau_points: Option<usize>,
    pub integrator: Option<IntegratorArg>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub preset: Option<Preset>,
}

impl PartialConfig {
    /// Fills every unset field from a weaker layer.
    pub fn merge_under(&mut self, weaker: PartialConfig) {
        macro_rules! fill {
            ($($field:ident),*) => {
                $(if self.$field.is_none() { self.$field = weaker.$field; })*
            };
        }
        fill!(
            f,
            temperature,
            alpha,
            omega,
            p,
            tau_max,
            tau_points,
            integrator,
            abs_tol,
            rel_tol,
            output,
            threads,
            preset
        );
    }

    /// Parses the flat `key = value` config format; `#` starts a comment.
    /// Keys mirror the long flag names; anything else is rejected.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = PartialConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!(
                    "{}:{}: expected `key = value`, got `{line}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "f" => cfg.f = Some(parse_f64_list(key, value)?),
                "temperature" => cfg.temperature = Some(parse_f64_list(key, value)?),
                "alpha" => {
                    cfg.alpha = Some(
                        split_list(key, value)?
                            .iter()
                            .map(|t| AlphaSpec::parse(t))
                            .collect::<Result<_, _>>()?,
                    )
                }
                "omega" => cfg.omega = Some(parse_f64_list(key, value)?),
                "p" => cfg.p = Some(parse_f64_list(key, value)?),
                "tau-max" => cfg.tau_max = Some(parse_f64(key, value)?),
                "tau-points" => {
                    cfg.tau_points = Some(value.parse().map_err(|_| {
                        CliError::usage(format!("tau-points: expected an integer, got `{value}`"))
                    })?)
                }
                "integrator" => {
                    cfg.integrator = Some(match value.to_ascii_lowercase().as_str() {
                        "rk4" => IntegratorArg::Rk4,
                        "rk45" => IntegratorArg::Rk45,
                        other => {
                            return Err(CliError::usage(format!(
                                "integrator: expected rk4 or rk45, got `{other}`"
                            )))
                        }
                    })
                }
                "abs-tol" => cfg.abs_tol = Some(parse_f64(key, value)?),
                "rel-tol" => cfg.rel_tol = Some(parse_f64(key, value)?),
                "output" => cfg.output = Some(PathBuf::from(value)),
                "threads" => {
                    cfg.threads = Some(value.parse().map_err(|_| {
                        CliError::usage(format!("threads: expected an integer, got `{value}`"))
                    })?)
                }
                "preset" => cfg.preset = Some(Preset::parse(value)?),
                unknown => {
                    return Err(CliError::usage(format!(
                        "{}:{}: unknown key `{unknown}`",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    /// Applies the preset layer and defaults, then validates every value.
    pub fn resolve(mut self) -> Result<RunConfig, CliError> {
        if let Some(preset) = self.preset {
            self.merge_under(preset.partial());
        }
        let cfg = RunConfig {
            f: self.f.unwrap_or_else(|| vec![0.0]),
            temperature: self.temperature.unwrap_or_else(|| vec![0.1]),
            alpha: self.alpha.unwrap_or_else(|| vec![AlphaSpec::BunchDavies]),
            omega: self.omega.unwrap_or_else(|| vec![1.0]),
            p: self.p.unwrap_or_else(|| vec![0.0]),
            tau_max: self.tau_max,
            tau_points: self.tau_points.unwrap_or(DEFAULT_TAU_POINTS),
            integrator: self.integrator.unwrap_or(IntegratorArg::Rk4),
            abs_tol: self.abs_tol.unwrap_or(DEFAULT_ABS_TOL),
            rel_tol: self.rel_tol.unwrap_or(DEFAULT_REL_TOL),
            output: self.output,
            threads: self.threads,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A fully resolved, validated sweep configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub f: Vec<f64>,
    pub temperature: Vec<f64>,
    pub alpha: Vec<AlphaSpec>,
    pub omega: Vec<f64>,
    pub p: Vec<f64>,
    /// `None` selects the default span `10 / (4 A_min)`.
    pub tau_max: Option<f64>,
    pub tau_points: usize,
    pub integrator: IntegratorArg,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        for list in [&self.f, &self.temperature, &self.omega, &self.p] {
            if list.is_empty() {
                return Err(CliError::usage("swept lists must be non-empty"));
            }
        }
        if self.alpha.is_empty() {
            return Err(CliError::usage("alpha: swept list must be non-empty"));
        }
        for &f in &self.f {
            InitialFamily::new(f).map_err(|e| CliError::usage(format!("f: {e}")))?;
        }
        for &p in &self.p {
            if !(0.0..1.0).contains(&p) {
                return Err(CliError::usage(format!("p: must lie in [0, 1), got {p}")));
            }
        }
        for &omega in &self.omega {
            for &t in &self.temperature {
                for alpha in &self.alpha {
                    BathParams::new(omega, t, alpha.to_vacuum())
                        .map_err(|e| CliError::usage(format!("bath: {e}")))?;
                }
            }
        }
        if let Some(tau_max) = self.tau_max {
            if !tau_max.is_finite() || tau_max <= 0.0 {
                return Err(CliError::usage(format!(
                    "tau-max: must be positive, got {tau_max}"
                )));
            }
        }
        if self.tau_points < 2 {
            return Err(CliError::usage("tau-points: need at least 2 grid points"));
        }
        if self.abs_tol.is_nan()
            || self.abs_tol <= 0.0
            || self.rel_tol.is_nan()
            || self.rel_tol <= 0.0
        {
            return Err(CliError::usage("abs-tol and rel-tol must be positive"));
        }
        if self.threads == Some(0) {
            return Err(CliError::usage("threads: must be at least 1"));
        }
        Ok(())
    }
}

fn split_list<'a>(key: &str, value: &'a str) -> Result<Vec<&'a str>, CliError> {
    let items: Vec<&str> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(CliError::usage(format!("{key}: empty value list")));
    }
    Ok(items)
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse()
        .map_err(|_| CliError::usage(format!("{key}: expected a number, got `{value}`")))
}

fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    split_list(key, value)?
        .into_iter()
        .map(|t| parse_f64(key, t))
        .collect()
}
