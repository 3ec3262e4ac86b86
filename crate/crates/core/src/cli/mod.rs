//! Command-line front end: `spectrum`, `sweep`, `zero-t`, `critical`, `validate`.

pub mod config;
pub mod grid;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::model::{
    analytic_spectrum, critical_couplings_scaled, ground_slope, ground_state_energy, Side, Spectrum,
};
use crate::spin_algebra::Multiplet;
use crate::transitions::{
    detect_jumps, fmt_f64, phase_diagram, plateaus, qpt_from_ceq, track_peaks_to_zero_t, Interval,
    DEFAULT_JUMP_THRESHOLD,
};
use crate::validate::{self, Fault, ValidationOptions};

pub use config::{CommonArgs, Format, Method, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;

pub const DEFAULT_PEAK_SCHEDULE: [f64; 3] = [70.0, 90.0, 110.0];
pub const DEFAULT_CEQ_BETA: f64 = 200.0;
pub const DEFAULT_JUMP_GRID: usize = 500;
/// Default scan windows extend this fraction past the outermost critical couplings.
pub const RANGE_MARGIN: f64 = 0.2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NoConvergence(String),
    #[error("validation failed")]
    ValidationFailed,
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Numeric(crate::error::Error),
}

impl From<crate::error::Error> for CliError {
    fn from(e: crate::error::Error) -> Self {
        match e {
            crate::error::Error::NoConvergence { .. } => CliError::NoConvergence(e.to_string()),
            crate::error::Error::InvalidInput(msg) => CliError::Usage(msg),
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoConvergence(_) => EXIT_NO_CONVERGENCE,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pm-qpt", version, about = "Plastino-Moszkowski model thermodynamics and quantum phase transitions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the affine levels and the critical couplings
    Spectrum(CommonArgs),
    /// Canonical observables on a (beta, lambda) grid, as CSV
    Sweep(CommonArgs),
    /// Zero-temperature dE/dlambda staircase
    #[command(name = "zero-t")]
    ZeroT(CommonArgs),
    /// Locate critical couplings (analytic, remnant peaks, slope jumps, N=2 residual)
    Critical(CommonArgs),
    /// Run the acceptance checks and print a pass/fail table
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct ValidateArgs {
    /// Fast subset of the checks
    #[arg(long)]
    pub quick: bool,

    /// Deliberately corrupt an observable to exercise the checks
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run_from_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    match run(&cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if !matches!(e, CliError::ValidationFailed) {
                let _ = writeln!(stderr, "error: {e}");
            }
            e.exit_code()
        }
    }
}

pub fn run(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Spectrum(a) => with_output(&a.resolve()?, stdout, cmd_spectrum),
        Command::Sweep(a) => with_output(&a.resolve()?, stdout, cmd_sweep),
        Command::ZeroT(a) => with_output(&a.resolve()?, stdout, cmd_zero_t),
        Command::Critical(a) => {
            let cfg = a.resolve()?;
            let mut warnings = Vec::new();
            let result = with_output(&cfg, stdout, |c, w| cmd_critical(c, w, &mut warnings));
            for msg in warnings {
                let _ = writeln!(stderr, "warning: {msg}");
            }
            result
        }
        Command::Validate(v) => cmd_validate(v, stdout),
    }
}

fn with_output<F>(cfg: &RunConfig, stdout: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&RunConfig, &mut dyn Write) -> Result<(), CliError>,
{
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                CliError::Usage(format!("cannot write {}: {e}", path.display()))
            })?;
            let mut w = BufWriter::new(file);
            body(cfg, &mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(cfg, stdout),
    }
}

fn spectrum_of(cfg: &RunConfig) -> Result<(Multiplet, Spectrum), CliError> {
    let m = Multiplet::new(cfg.n_particles)?;
    Ok((m, analytic_spectrum(m, cfg.e_gap)?))
}

fn require<'a>(v: &'a Option<Vec<f64>>, what: &str) -> Result<&'a [f64], CliError> {
    v.as_deref()
        .ok_or_else(|| CliError::Usage(format!("{what} is required")))
}

/// Exact rendering of a half-integer `M`.
fn fmt_m(m: f64) -> String {
    if m.fract() == 0.0 {
        format!("{m}")
    } else {
        format!("{}/2", (2.0 * m) as i64)
    }
}

pub fn cmd_spectrum(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (m, s) = spectrum_of(cfg)?;
    let lambdas = cfg.lambda.clone().unwrap_or_default();
    let criticals = critical_couplings_scaled(m, cfg.e_gap)?;
    match cfg.format {
        Format::Csv => {
            let mut header = vec!["m".to_string(), "intercept".into(), "slope".into()];
            header.extend(lambdas.iter().map(|l| format!("energy_at_{l}")));
            writeln!(out, "{}", header.join(","))?;
            for level in s.levels() {
                let mut row = vec![fmt_m(level.m), fmt_f64(level.intercept), fmt_f64(level.slope)];
                row.extend(lambdas.iter().map(|&l| fmt_f64(level.energy(l))));
                writeln!(out, "{}", row.join(","))?;
            }
            writeln!(out)?;
            writeln!(out, "n,lambda_c,lambda_c_rational,lower_m,upper_m")?;
            for c in &criticals {
                let rational = if cfg.e_gap == 1.0 {
                    format!("1/{}", c.denominator)
                } else {
                    format!("{}/{}", cfg.e_gap, c.denominator)
                };
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.n,
                    fmt_f64(c.lambda_c),
                    rational,
                    fmt_m(c.lower_m),
                    fmt_m(c.upper_m)
                )?;
            }
        }
        Format::Json => {
            let levels: Vec<Value> = s
                .levels()
                .iter()
                .map(|l| {
                    json!({
                        "m": l.m,
                        "intercept": l.intercept,
                        "slope": l.slope,
                        "energies": lambdas.iter().map(|&x| l.energy(x)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let report = json!({
                "n_particles": cfg.n_particles,
                "e_gap": cfg.e_gap,
                "lambda": lambdas,
                "levels": levels,
                "critical_points": criticals,
            });
            serde_json::to_writer_pretty(&mut *out, &report).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn cmd_sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (_, s) = spectrum_of(cfg)?;
    let betas = require(&cfg.beta, "--beta")?;
    let lambdas = require(&cfg.lambda, "--lambda-grid")?;
    let table = phase_diagram(&s, betas, lambdas)?;
    match cfg.format {
        Format::Csv => table.write_csv(&mut *out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &table.rows).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn cmd_zero_t(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (_, s) = spectrum_of(cfg)?;
    let lambdas = require(&cfg.lambda, "--lambda-grid")?;
    let rows: Vec<(f64, f64, f64, usize)> = lambdas
        .iter()
        .map(|&l| {
            let gs = ground_state_energy(&s, l);
            (l, ground_slope(&s, l), gs.energy, gs.indices.len())
        })
        .collect();
    match cfg.format {
        Format::Csv => {
            writeln!(out, "lambda,c_star_lambda_zero_t,ground_energy,degeneracy")?;
            for (l, g, e, d) in rows {
                writeln!(out, "{},{},{},{d}", fmt_f64(l), fmt_f64(g), fmt_f64(e))?;
            }
        }
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|&(l, g, e, d)| {
                    json!({"lambda": l, "c_star_lambda_zero_t": g, "ground_energy": e, "degeneracy": d})
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &v).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// JSON report keyed by method name. Unresolved peak merges become warnings;
/// an unconverged N=2 residual minimum is written out and then reported as
/// non-convergence.
pub fn cmd_critical(
    cfg: &RunConfig,
    out: &mut dyn Write,
    warnings: &mut Vec<String>,
) -> Result<(), CliError> {
    let (m, s) = spectrum_of(cfg)?;
    if cfg.n_particles < 2 {
        return Err(CliError::Usage("critical needs --n 2 or more".into()));
    }
    let criticals = critical_couplings_scaled(m, cfg.e_gap)?;
    let analytic: Vec<f64> = criticals.iter().map(|c| c.lambda_c).collect();
    let lc_min = analytic.first().copied().unwrap_or(cfg.e_gap);
    let lc_max = analytic.last().copied().unwrap_or(cfg.e_gap);

    // `all` includes the two-particle residual only where it applies
    let wants = |m: Method| match cfg.method {
        Method::All => m != Method::Ceq || cfg.n_particles == 2,
        other => other == m,
    };
    if cfg.method == Method::Ceq && cfg.n_particles != 2 {
        return Err(CliError::Usage("--method ceq applies to --n 2 only".into()));
    }

    let mut report = serde_json::Map::new();
    report.insert("n_particles".into(), json!(cfg.n_particles));
    report.insert("e_gap".into(), json!(cfg.e_gap));
    report.insert(
        "analytic".into(),
        json!({ "lambda_c": analytic, "points": criticals }),
    );

    let mut unconverged = None;

    if wants(Method::Peaks) {
        let schedule = cfg.beta.clone().unwrap_or_else(|| DEFAULT_PEAK_SCHEDULE.to_vec());
        let range = match &cfg.lambda {
            Some(l) if l.len() >= 2 => Interval::new(l[0], l[l.len() - 1])?,
            _ => Interval::new(lc_min * (1.0 - RANGE_MARGIN), lc_max * (1.0 + RANGE_MARGIN))?,
        };
        let track = track_peaks_to_zero_t(&s, &schedule, range)?;
        for u in &track.unresolved {
            warnings.push(format!(
                "peaks around lambda_c={} unresolved at beta={} (left {}, right {})",
                u.lambda_c, u.beta, u.left_found, u.right_found
            ));
        }
        let last_beta = *schedule.last().expect("schedule validated non-empty");
        let agreement: Vec<Value> = track
            .crossings
            .iter()
            .map(|&lc| {
                let at = |side| {
                    track
                        .series(lc, side)
                        .into_iter()
                        .find(|p| p.beta == last_beta)
                        .map(|p| p.peak.lambda_at_peak)
                };
                let center = match (at(Side::Left), at(Side::Right)) {
                    (Some(a), Some(b)) => Some(0.5 * (a + b)),
                    _ => None,
                };
                json!({
                    "lambda_c": lc,
                    "beta": last_beta,
                    "flank_center": center,
                    "delta": center.map(|c| c - lc),
                })
            })
            .collect();
        report.insert(
            "peaks".into(),
            json!({
                "range": range,
                "schedule": track.schedule,
                "tracked": track.peaks,
                "unresolved": track.unresolved,
                "agreement": agreement,
            }),
        );
    }

    if wants(Method::Jumps) {
        let range = match &cfg.lambda {
            Some(l) if l.len() >= 2 => Interval::new(l[0], l[l.len() - 1])?,
            _ => Interval::new(0.0, lc_max * (1.0 + RANGE_MARGIN))?,
        };
        let grid = cfg.grid_points.unwrap_or(DEFAULT_JUMP_GRID);
        let threshold = cfg.threshold.unwrap_or(DEFAULT_JUMP_THRESHOLD);
        let jumps = detect_jumps(&s, range, grid, threshold)?;
        let first = ground_slope_right(&s, range.lo);
        let agreement: Vec<Value> = jumps
            .iter()
            .map(|j| {
                let nearest = analytic
                    .iter()
                    .copied()
                    .min_by(|a, b| (a - j.lambda).abs().total_cmp(&(b - j.lambda).abs()));
                json!({ "lambda": j.lambda, "lambda_c": nearest, "delta": nearest.map(|c| j.lambda - c) })
            })
            .collect();
        report.insert(
            "jumps".into(),
            json!({
                "range": range,
                "grid_points": grid,
                "threshold": threshold,
                "jumps": jumps,
                "plateaus": plateaus(first, &jumps),
                "agreement": agreement,
            }),
        );
    }

    if wants(Method::Ceq) {
        let betas = cfg.beta.clone().unwrap_or_else(|| vec![DEFAULT_CEQ_BETA]);
        let search = Interval::new(0.5, 1.5)?;
        let mut estimates = Vec::new();
        for &b in &betas {
            let est = qpt_from_ceq(b, search)?;
            if !est.converged && unconverged.is_none() {
                unconverged = Some(format!(
                    "two-particle residual minimum at beta={b} lies on the search boundary (xi={})",
                    est.xi
                ));
            }
            estimates.push(est);
        }
        report.insert(
            "ceq".into(),
            json!({
                "search_interval": search,
                "estimates": estimates,
                "zero_temperature_root": crate::thermo::ceq_zero_temperature_root(),
                "delta": estimates.iter().map(|e| e.xi - 1.0).collect::<Vec<_>>(),
            }),
        );
    }

    report.insert("warnings".into(), json!(warnings));
    serde_json::to_writer_pretty(&mut *out, &Value::Object(report)).map_err(io::Error::from)?;
    writeln!(out)?;
    match unconverged {
        Some(msg) => Err(CliError::NoConvergence(msg)),
        None => Ok(()),
    }
}

fn ground_slope_right(s: &Spectrum, lambda: f64) -> f64 {
    crate::model::ground_slope_one_sided(s, lambda, Side::Right)
}

pub fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let opts = ValidationOptions {
        quick: args.quick,
        fault: args.inject_fault,
    };
    let outcomes = validate::run_all(&opts);
    validate::print_table(&outcomes, out)?;
    if outcomes.iter().all(|o| o.passed) {
        Ok(())
    } else {
        Err(CliError::ValidationFailed)
    }
}
