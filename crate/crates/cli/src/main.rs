//! `eursim` - qutrit-qubit open-system simulator in de Sitter alpha-vacua.

use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use eursim::{
    equilibrium_state, initial_state, weak_measurement_reversal, InitialFamily, UncertaintyReport,
};
use eursim_cli::config::{AlphaSpec, IntegratorArg, PartialConfig, Preset};
use eursim_cli::error::CliError;
use eursim_cli::output::{emit_csv, fmt_sig12, sort_rows, ResultRow};
use eursim_cli::sweep::{
    evolve_on_grid, expand_grid, measure_point, run_sweep, tau_grid, GridPoint,
};

#[derive(Parser)]
#[command(
    name = "eursim",
    version,
    about = "Entropic uncertainty, entanglement and mixedness of a qutrit-qubit pair \
             whose qubit couples to a scalar field in de Sitter alpha-vacua"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dissipator coefficients A and B for one bath
    Coeffs(CoeffsArgs),
    /// Integrate one trajectory and dump the state entries per grid time
    Evolve(EvolveArgs),
    /// Measures along one trajectory
    Measures(MeasuresArgs),
    /// Measures over a multi-parameter grid
    Sweep(SweepArgs),
    /// Closed-form equilibrium measures (tau = inf rows)
    Equilibrium(EquilibriumArgs),
}

#[derive(Args)]
struct BathArgs {
    /// Qubit energy level spacing
    #[arg(long)]
    omega: f64,
    /// Gibbons-Hawking temperature
    #[arg(short = 'T', long)]
    temperature: f64,
    /// Vacuum parameter: a negative number, or `BD` for Bunch-Davies
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
}

impl BathArgs {
    fn point(&self, f: f64, p: f64) -> Result<GridPoint, CliError> {
        Ok(GridPoint {
            f,
            temperature: self.temperature,
            alpha: AlphaSpec::parse(&self.alpha)?,
            omega: self.omega,
            p,
        })
    }
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    bath: BathArgs,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    bath: BathArgs,
    /// Initial family parameter, in [0, 1/3]
    #[arg(long, default_value_t = 0.0)]
    f: f64,
    /// Weak measurement reversal strength applied to the initial state
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    /// Largest proper time; defaults to 10 / (4A)
    #[arg(long)]
    tau_max: Option<f64>,
    /// Number of grid times, including tau = 0
    #[arg(long, default_value_t = eursim_cli::config::DEFAULT_TAU_POINTS)]
    tau_points: usize,
    #[arg(long, value_enum, default_value_t = IntegratorArg::Rk4)]
    integrator: IntegratorArg,
    /// Per-component absolute tolerance (rk45)
    #[arg(long, default_value_t = eursim_cli::config::DEFAULT_ABS_TOL)]
    abs_tol: f64,
    /// Per-component relative tolerance (rk45)
    #[arg(long, default_value_t = eursim_cli::config::DEFAULT_REL_TOL)]
    rel_tol: f64,
    /// Output file; standard output when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

impl TrajectoryArgs {
    fn to_partial(&self) -> Result<PartialConfig, CliError> {
        Ok(PartialConfig {
            f: Some(vec![self.f]),
            temperature: Some(vec![self.bath.temperature]),
            alpha: Some(vec![AlphaSpec::parse(&self.bath.alpha)?]),
            omega: Some(vec![self.bath.omega]),
            p: Some(vec![self.p]),
            tau_max: self.tau_max,
            tau_points: Some(self.tau_points),
            integrator: Some(self.integrator),
            abs_tol: Some(self.abs_tol),
            rel_tol: Some(self.rel_tol),
            output: self.output.clone(),
            ..PartialConfig::default()
        })
    }
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    trajectory: TrajectoryArgs,
}

#[derive(Args)]
struct MeasuresArgs {
    #[command(flatten)]
    trajectory: TrajectoryArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Initial family parameters (comma-separated)
    #[arg(long, value_delimiter = ',')]
    f: Option<Vec<f64>>,
    /// Temperatures (comma-separated)
    #[arg(short = 'T', long, value_delimiter = ',')]
    temperature: Option<Vec<f64>>,
    /// Vacuum parameters: numbers or `BD` (comma-separated)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<String>>,
    /// Energy level spacings (comma-separated)
    #[arg(long, value_delimiter = ',')]
    omega: Option<Vec<f64>>,
    /// Weak measurement reversal strengths (comma-separated)
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_points: Option<usize>,
    #[arg(long, value_enum)]
    integrator: Option<IntegratorArg>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Figure preset: fig1..fig5
    #[arg(long)]
    preset: Option<String>,
    /// Flat key-value config file; explicit flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for grid evaluation
    #[arg(long)]
    threads: Option<usize>,
    /// Output file; standard output when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EquilibriumArgs {
    #[arg(long, value_delimiter = ',')]
    f: Option<Vec<f64>>,
    #[arg(short = 'T', long, value_delimiter = ',')]
    temperature: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    omega: Option<Vec<f64>>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Coeffs(args) => cmd_coeffs(args),
        Command::Evolve(args) => cmd_evolve(args),
        Command::Measures(args) => cmd_measures(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Equilibrium(args) => cmd_equilibrium(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn write_lines(dest: Option<&Path>, body: &str) -> Result<(), CliError> {
    match dest {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())?;
            lock.flush()?;
        }
        Some(path) => {
            let file = std::fs::File::create(path)?;
            let mut w = BufWriter::new(file);
            w.write_all(body.as_bytes())?;
            w.flush()?;
        }
    }
    Ok(())
}

fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    emit_csv(rows, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("csv is ascii")
}

fn cmd_coeffs(args: CoeffsArgs) -> Result<(), CliError> {
    let point = args.bath.point(0.0, 0.0)?;
    // out-of-range bath values are a usage problem, not a numeric one
    point
        .bath_params()
        .map_err(|e| CliError::usage(e.to_string()))?;
    let coeffs = point.coefficients()?;
    let body = format!(
        "omega,T,alpha,A,B\n{},{},{},{},{}\n",
        fmt_sig12(point.omega),
        fmt_sig12(point.temperature),
        point.alpha.csv_label(),
        fmt_sig12(coeffs.a()),
        fmt_sig12(coeffs.b()),
    );
    write_lines(None, &body)
}

fn evolve_header() -> String {
    let mut cols = vec!["tau".to_string()];
    for i in 0..6 {
        for j in 0..6 {
            cols.push(format!("re{i}{j}"));
            cols.push(format!("im{i}{j}"));
        }
    }
    cols.join(",")
}

fn cmd_evolve(args: EvolveArgs) -> Result<(), CliError> {
    let output = args.trajectory.output.clone();
    let cfg = args.trajectory.to_partial()?.resolve()?;
    let points = expand_grid(&cfg);
    let point = points[0];
    let taus = tau_grid(&cfg, &points)?;
    let numeric =
        |e: eursim::Error| CliError::Numeric(format!("at f={}, p={}: {e}", point.f, point.p));

    let family = InitialFamily::new(point.f).map_err(numeric)?;
    let coeffs = point.coefficients()?;
    let mut rho0 = initial_state(&family).map_err(numeric)?;
    if point.p > 0.0 {
        rho0 = weak_measurement_reversal(&rho0, point.p).map_err(numeric)?;
    }
    let (traj, stride) = evolve_on_grid(&rho0, &coeffs, &taus, &cfg).map_err(numeric)?;

    let mut body = evolve_header();
    body.push('\n');
    for (k, &tau) in taus.iter().enumerate() {
        let state = traj.state(k * stride);
        let mut cols = vec![fmt_sig12(tau)];
        for i in 0..6 {
            for j in 0..6 {
                let z = state.get(i, j);
                cols.push(fmt_sig12(z.re));
                cols.push(fmt_sig12(z.im));
            }
        }
        body.push_str(&cols.join(","));
        body.push('\n');
    }
    write_lines(output.as_deref(), &body)
}

fn cmd_measures(args: MeasuresArgs) -> Result<(), CliError> {
    let output = args.trajectory.output.clone();
    let cfg = args.trajectory.to_partial()?.resolve()?;
    let points = expand_grid(&cfg);
    let taus = tau_grid(&cfg, &points)?;
    let mut rows = measure_point(&points[0], &taus, &cfg)?;
    sort_rows(&mut rows);
    write_lines(output.as_deref(), &rows_to_csv(&rows))
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let mut cfg = PartialConfig {
        f: args.f,
        temperature: args.temperature,
        alpha: args
            .alpha
            .map(|list| list.iter().map(|t| AlphaSpec::parse(t)).collect())
            .transpose()?,
        omega: args.omega,
        p: args.p,
        tau_max: args.tau_max,
        tau_points: args.tau_points,
        integrator: args.integrator,
        abs_tol: args.abs_tol,
        rel_tol: args.rel_tol,
        output: args.output,
        threads: args.threads,
        preset: args.preset.as_deref().map(Preset::parse).transpose()?,
    };
    if let Some(path) = &args.config {
        cfg.merge_under(PartialConfig::from_file(path)?);
    }
    let cfg = cfg.resolve()?;
    let rows = run_sweep(&cfg)?;
    write_lines(cfg.output.as_deref(), &rows_to_csv(&rows))
}

fn cmd_equilibrium(args: EquilibriumArgs) -> Result<(), CliError> {
    let cfg = PartialConfig {
        f: args.f,
        temperature: args.temperature,
        alpha: args
            .alpha
            .map(|list| list.iter().map(|t| AlphaSpec::parse(t)).collect())
            .transpose()?,
        omega: args.omega,
        tau_points: Some(2), // unused, satisfies validation
        ..PartialConfig::default()
    }
    .resolve()?;

    let mut rows = Vec::new();
    for point in expand_grid(&cfg) {
        let numeric = |e: eursim::Error| CliError::Numeric(format!("at f={}: {e}", point.f));
        let family = InitialFamily::new(point.f).map_err(numeric)?;
        let coeffs = point.coefficients()?;
        let state = equilibrium_state(&family, &coeffs).map_err(numeric)?;
        let report = UncertaintyReport::from_state(f64::INFINITY, &state).map_err(numeric)?;
        rows.push(ResultRow {
            f: point.f,
            temperature: point.temperature,
            alpha: point.alpha,
            omega: point.omega,
            p: 0.0,
            tau: f64::INFINITY,
            l: report.l,
            r: report.r,
            negativity: report.negativity,
            mixedness: report.mixedness,
            purity: report.purity,
        });
    }
    sort_rows(&mut rows);
    write_lines(args.output.as_deref(), &rows_to_csv(&rows))
}
