//! Command-line driver: family sweeps, tail verdicts, the canonical-weight
//! integral identity, and seeded ring-inequality stress runs.
//!
//! Exit codes are part of the interface: 0 success (or a bounded-below
//! verdict), 1 usage and configuration errors, 2 numerical trouble
//! (non-converged quadrature, a failed identity, a violated inequality),
//! 3 a tends-to-zero verdict, 4 an inconclusive verdict.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qcgrowth::config::ConfigError;
use qcgrowth::report::cell;
use qcgrowth::sweep::{run_sweep, Criterion, SweepOutcome};
use qcgrowth::{
    iterated_log_identity_check, liminf_verdict, parse_reports_csv, reports_to_csv,
    ring_inequality_check, seeded_test_densities, AnnulusSpec, Error, GrowthReport,
    QuadratureSettings, Result, RunConfig, Verdict, VerdictKind, VerdictSource,
};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_TENDS_TO_ZERO: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

/// Quadrature relative tolerance override, applied after the config.
const RTOL_ENV_VAR: &str = "QCG_QUAD_RTOL";

#[derive(Parser)]
#[command(
    name = "qcgrowth",
    version,
    about = "Growth bounds of plane mappings with unbounded distortion, on a desk scale"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the configured radius grid and emit one report row per radius.
    Analyze(RunArgs),
    /// Run a sweep (or load a report table) and print the tail verdict.
    Verify(RunArgs),
    /// Compare the canonical weight's integral against its closed form.
    Lemma5(Lemma5Args),
    /// Stress the ring inequality with seeded random admissible densities.
    RingCheck(RingCheckArgs),
    /// List the exact family catalog and its config keys.
    Families,
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted. Overrides the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format. Overrides the config's `format`.
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
}

#[derive(Args)]
struct Lemma5Args {
    /// Weight depth N; the integral runs from e_N upward.
    #[arg(long = "N")]
    depth: u32,
    /// Upper integration limit.
    #[arg(long = "R")]
    radius: f64,
}

#[derive(Args)]
struct RingCheckArgs {
    /// Path to the JSON run configuration (family and ring window).
    #[arg(long)]
    config: PathBuf,
    /// Number of trial densities, the extremal one included.
    #[arg(long)]
    trials: Option<u32>,
    /// Seed for the random densities. Overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Lemma5(args) => cmd_lemma5(&args),
        Command::RingCheck(args) => cmd_ring_check(&args),
        Command::Families => cmd_families(),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NoConvergence { .. } => EXIT_NUMERICAL,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::File {
        what: "config",
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    RunConfig::from_json_str(&text)
}

/// Config-derived quadrature settings with the environment override applied.
fn settings_for(cfg: &RunConfig) -> Result<QuadratureSettings> {
    let mut settings = cfg.settings()?;
    apply_env_rtol(&mut settings)?;
    Ok(settings)
}

fn apply_env_rtol(settings: &mut QuadratureSettings) -> Result<()> {
    if let Ok(text) = std::env::var(RTOL_ENV_VAR) {
        let value: f64 = text.trim().parse().map_err(|_| ConfigError::Value {
            what: RTOL_ENV_VAR,
            requirement: "a floating point number",
            value: f64::NAN,
        })?;
        settings.rel_tol = value;
        settings.validate()?;
    }
    Ok(())
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| {
            ConfigError::File {
                what: "output",
                path: path.display().to_string(),
                message: e.to_string(),
            }
            .into()
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct AnalyzeDocument<'a> {
    criterion: &'a str,
    floor: Option<f64>,
    fitted_c: Option<f64>,
    exponent: Option<f64>,
    flagged_rows: &'a [usize],
    reports: &'a [GrowthReport],
}

fn render_reports(outcome: &SweepOutcome, format: &str) -> String {
    match format {
        "json" => {
            let doc = AnalyzeDocument {
                criterion: outcome.criterion.token(),
                floor: outcome.floor,
                fitted_c: outcome.fitted_c,
                exponent: outcome.exponent,
                flagged_rows: &outcome.flagged,
                reports: &outcome.reports,
            };
            let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
            text.push('\n');
            text
        }
        _ => reports_to_csv(&outcome.reports),
    }
}

fn warn_flagged(flagged: &[usize]) {
    if !flagged.is_empty() {
        eprintln!(
            "warning: quadrature did not converge on {} of the grid rows (indices {:?}); \
             values are best estimates",
            flagged.len(),
            flagged
        );
    }
}

fn cmd_analyze(args: &RunArgs) -> Result<u8> {
    let cfg = load_config(&args.config)?;
    let settings = settings_for(&cfg)?;
    let outcome = run_sweep(&cfg, &settings)?;

    let format = args
        .format
        .as_deref()
        .or(cfg.format.as_deref())
        .unwrap_or("csv");
    let out = args.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from));
    write_or_print(out.as_deref(), &render_reports(&outcome, format))?;

    warn_flagged(&outcome.flagged);
    Ok(if outcome.flagged.is_empty() { 0 } else { EXIT_NUMERICAL })
}

#[derive(Serialize)]
struct VerdictDocument<'a> {
    criterion: &'a str,
    kind: VerdictKind,
    tail_min: f64,
    threshold: f64,
    tail_fraction: f64,
    flagged_rows: &'a [usize],
}

/// A floor shared by the whole loaded table, if the rows agree on one.
fn uniform_floor(reports: &[GrowthReport]) -> Option<f64> {
    let first = reports.first()?.floor?;
    reports
        .iter()
        .all(|r| r.floor == Some(first))
        .then_some(first)
}

fn cmd_verify(args: &RunArgs) -> Result<u8> {
    let cfg = load_config(&args.config)?;
    let settings = settings_for(&cfg)?;
    let criterion = Criterion::from_config(&cfg)?;

    let (reports, floor, source, flagged): (Vec<GrowthReport>, Option<f64>, VerdictSource, Vec<usize>) =
        match cfg.reports_csv.as_deref() {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| ConfigError::File {
                    what: "reports",
                    path: path.to_string(),
                    message: e.to_string(),
                })?;
                let reports = parse_reports_csv(&text)?;
                let floor = cfg.floor.or_else(|| uniform_floor(&reports));
                (reports, floor, criterion.source(), Vec::new())
            }
            None => {
                let outcome = run_sweep(&cfg, &settings)?;
                (outcome.reports, outcome.floor, outcome.source, outcome.flagged)
            }
        };

    let verdict: Verdict = liminf_verdict(&reports, cfg.tail_fraction, floor, source)?;
    println!("criterion: {criterion}");
    println!("verdict: {}", verdict.kind);
    println!("tail_min: {}", verdict.tail_min);
    println!("threshold: {}", verdict.threshold);

    if let Some(out) = args.out.as_deref() {
        let doc = VerdictDocument {
            criterion: criterion.token(),
            kind: verdict.kind,
            tail_min: verdict.tail_min,
            threshold: verdict.threshold,
            tail_fraction: cfg.tail_fraction,
            flagged_rows: &flagged,
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
        text.push('\n');
        write_or_print(Some(out), &text)?;
    }

    warn_flagged(&flagged);
    if !flagged.is_empty() {
        return Ok(EXIT_NUMERICAL);
    }
    Ok(match verdict.kind {
        VerdictKind::BoundedBelow => 0,
        VerdictKind::TendsToZero => EXIT_TENDS_TO_ZERO,
        VerdictKind::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn cmd_lemma5(args: &Lemma5Args) -> Result<u8> {
    let mut settings = QuadratureSettings::default();
    apply_env_rtol(&mut settings)?;
    let check = iterated_log_identity_check(args.depth, args.radius, &settings)?;
    println!("numeric: {}", check.numeric);
    println!("closed_form: {}", check.closed_form);
    println!("abs_error: {}", check.abs_error);
    let tolerance = f64::max(1e-8, 1e-8 * check.closed_form.abs());
    Ok(if check.abs_error <= tolerance { 0 } else { EXIT_NUMERICAL })
}

fn cmd_ring_check(args: &RingCheckArgs) -> Result<u8> {
    let cfg = load_config(&args.config)?;
    let settings = settings_for(&cfg)?;
    let trials = args.trials.or(cfg.trials).unwrap_or(0);
    if trials == 0 {
        return Err(Error::InvalidParameter {
            what: "ring check trials (want at least 1)",
            value: trials as f64,
        });
    }
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let profile = cfg.profile()?;
    let (r1, r2) = cfg.ring_window()?;
    let annulus = AnnulusSpec::new(profile.center(), r1, r2)?;

    let etas = seeded_test_densities(r1, r2, trials, seed)?;
    let rows = ring_inequality_check(&profile, &annulus, &etas, &settings)?;
    println!("trial,lhs,rhs,holds");
    for (i, row) in rows.iter().enumerate() {
        println!("{i},{},{},{}", cell(row.lhs), cell(row.rhs), row.holds);
    }
    let (min_index, min_row) = rows
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.rhs.total_cmp(&b.1.rhs))
        .expect("at least one trial");
    println!("min rhs: {} at trial {min_index}", cell(min_row.rhs));
    let violations = rows.iter().filter(|r| !r.holds).count();
    if violations == 0 {
        println!("all {} trials hold", rows.len());
        Ok(0)
    } else {
        println!("{violations} of {} trials violate the bound", rows.len());
        Ok(EXIT_NUMERICAL)
    }
}

fn cmd_families() -> Result<u8> {
    println!("family       profile rho(r)                      dilatation K(r)        config keys");
    println!("identity     r                                   1                      family");
    println!("power        r^alpha, 0 < alpha <= 1             1/alpha                family, alpha");
    println!("log-stretch  r/e for r <= e, (ln r)^gamma above  max(1, ln(r)/gamma)    family, gamma");
    Ok(0)
}
