//! `xonly` subcommands.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use xonly_core::synthesis::{synthesize_cphase, synthesize_cphase_alt};
use xonly_core::verify::{four_spin_nogo_demo, NogoConfig};
use xonly_core::{VariantProfile, TWO_PI};

use crate::angle::parse_angle;
use crate::report::verify_sequence;
use crate::schedule::Schedule;
use crate::sweep::{sweep_csv, Curve};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "xonly", version, about = "Compile and verify exchange-only CPhase pulse schedules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile CPhase(phi) into a verified pulse schedule.
    Synthesize(SynthesizeArgs),
    /// Check a schedule file on both total-spin sectors and every S_z.
    Verify(VerifyArgs),
    /// Sample one of the phase curves as CSV.
    Sweep(SweepArgs),
    /// Run the four-spin trace, determinant and entangling-phase checks.
    Nogo(NogoArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthesizeArgs {
    /// Target phase: radians, or `pi`, `2pi/3`, `acos(1/4)`, ...
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    phi: f64,
    /// `fig9a`, `fig9b` or `custom:<11 s/l letters>`.
    #[arg(long)]
    profile: Option<String>,
    /// Use the split-block construction with this first angle.
    #[arg(long, value_parser = parse_angle)]
    alt_theta1: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    schedule: PathBuf,
    /// Only print reports for this total spin.
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=1))]
    g: Option<u32>,
    /// Override the target phase stored in the file.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(value_enum)]
    curve: Curve,
    #[arg(long, default_value_t = 257, value_parser = clap::value_parser!(u32).range(2..))]
    points: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct NogoArgs {
    /// Fully random four-spin sequences.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Diagonal-by-construction sequences.
    #[arg(long, default_value_t = 50)]
    diagonal_trials: usize,
    #[arg(long, default_value_t = 20)]
    pulses: usize,
    #[arg(long, default_value_t = 6)]
    blocks: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

/// A failed command: its exit code and message.
struct Failure(i32, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Synthesize(a) => synthesize(a, stdout, stderr),
        Command::Verify(a) => verify(a, stdout),
        Command::Sweep(a) => sweep(a, stdout),
        Command::Nogo(a) => nogo(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

fn require(format: Format, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(usage(format!("format {format:?} is not available for this command").to_lowercase()))
    }
}

fn emit(path: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(|e| usage(format!("cannot write output: {e}"))),
    }
}

fn parse_profile(text: &str) -> Result<VariantProfile, Failure> {
    let spec = match text {
        "fig9a" | "fig9b" => text,
        _ => text
            .strip_prefix("custom:")
            .ok_or_else(|| usage(format!("unknown profile {text:?}; use fig9a, fig9b or custom:<letters>")))?,
    };
    VariantProfile::parse(spec).map_err(|e| usage(e.to_string()))
}

fn synthesize(a: SynthesizeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    require(a.format, &[Format::Json])?;
    if !(a.phi > 0.0 && a.phi < TWO_PI) {
        return Err(usage(format!("--phi {} is outside (0, 2pi)", a.phi)));
    }
    let result = match (a.alt_theta1, &a.profile) {
        (Some(_), Some(_)) => return Err(usage("--alt-theta1 fixes every block to short; drop --profile")),
        (Some(theta1), None) => synthesize_cphase_alt(a.phi, theta1),
        (None, p) => synthesize_cphase(a.phi, &parse_profile(p.as_deref().unwrap_or("fig9a"))?),
    }
    .map_err(|e| usage(e.to_string()))?;

    let schedule = Schedule::from_result(&result);
    let seq = schedule.to_sequence().map_err(|e| Failure(EXIT_FAIL, e.to_string()))?;
    let check = verify_sequence(&seq, Some(a.phi), a.tol).map_err(|e| Failure(EXIT_FAIL, e.to_string()))?;

    let mut summary = format!("core pulses: {}\ncorrection pulses: {}\n", result.core.len(), result.corrections.len());
    for p in &result.corrections {
        let (i, j) = p.pair();
        summary.push_str(&format!("  ({i},{j}) t = {}\n", p.t()));
    }
    summary.push_str(&check.summary());
    if !check.passed {
        return Err(Failure(EXIT_FAIL, format!("schedule failed verification; not written\n{summary}")));
    }
    match &a.output.out {
        Some(path) => {
            emit(Some(path), &schedule.to_json(), stdout)?;
            emit(None, &summary, stdout)?;
        }
        None => {
            emit(None, &schedule.to_json(), stdout)?;
            emit(None, &summary, stderr)?;
        }
    }
    Ok(EXIT_PASS)
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    require(a.format, &[Format::Text, Format::Json])?;
    let text = fs::read_to_string(&a.schedule)
        .map_err(|e| usage(format!("cannot read {}: {e}", a.schedule.display())))?;
    let schedule = Schedule::parse(&text).map_err(|e| usage(e.to_string()))?;
    let seq = schedule.to_sequence().map_err(|e| usage(e.to_string()))?;
    let phi = a.phi.or(schedule.meta.phi);
    let mut check = verify_sequence(&seq, phi, a.tol).map_err(|e| usage(e.to_string()))?;
    if let Some(g) = a.g {
        check.reports.retain(|r| r.g == g);
    }
    let body = match a.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&check).expect("report serializes")),
        _ => {
            let mut s = String::new();
            for r in &check.reports {
                s.push_str(&format!(
                    "g={} M={:>2}  leakage {:.3e}  off-diagonal {:.3e}  entangling phase {}\n",
                    r.g,
                    r.m,
                    r.leakage_norm,
                    r.off_diagonal,
                    r.entangling_phase.map_or("-".to_string(), |p| format!("{p:.9}"))
                ));
            }
            s.push_str(&check.summary());
            s
        }
    };
    emit(a.output.out.as_deref(), &body, stdout)?;
    Ok(if check.passed { EXIT_PASS } else { EXIT_FAIL })
}

fn sweep(a: SweepArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    require(a.format, &[Format::Csv])?;
    emit(a.output.out.as_deref(), &sweep_csv(a.curve, a.points as usize), stdout)?;
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct NogoJson {
    seed: u64,
    pair_traces: Vec<PairTraceJson>,
    max_trace_alternating: f64,
    random_trials: usize,
    max_determinant_deviation: f64,
    diagonal_trials: usize,
    non_diagonal: usize,
    max_entangling_phase: f64,
    max_d_spread: f64,
    u4_entangling_phase: f64,
    passed: bool,
}

#[derive(Serialize)]
struct PairTraceJson {
    pair: [usize; 2],
    traces: [f64; 3],
    alternating_sum: f64,
}

fn nogo(a: NogoArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    require(a.format, &[Format::Text, Format::Json])?;
    if a.trials == 0 || a.diagonal_trials == 0 {
        return Err(usage("trial counts must be positive"));
    }
    let cfg = NogoConfig {
        random_trials: a.trials,
        diagonal_trials: a.diagonal_trials,
        pulses_per_trial: a.pulses,
        blocks_per_trial: a.blocks,
        seed: a.seed,
    };
    let r = four_spin_nogo_demo(&cfg).map_err(|e| usage(e.to_string()))?;
    let passed = r.passed();
    let body = match a.format {
        Format::Json => {
            let j = NogoJson {
                seed: r.seed,
                pair_traces: r
                    .pair_traces
                    .iter()
                    .map(|&((i, j), t)| PairTraceJson { pair: [i, j], traces: t.traces, alternating_sum: t.alternating_sum })
                    .collect(),
                max_trace_alternating: r.max_trace_alternating,
                random_trials: r.random_trials,
                max_determinant_deviation: r.max_determinant_deviation,
                diagonal_trials: r.diagonal_trials,
                non_diagonal: r.non_diagonal,
                max_entangling_phase: r.max_entangling_phase,
                max_d_spread: r.max_d_spread,
                u4_entangling_phase: r.u4_entangling_phase,
                passed,
            };
            format!("{}\n", serde_json::to_string_pretty(&j).expect("report serializes"))
        }
        _ => {
            let mut s = format!("seed: {}\npair    tr(d=0)  tr(d=1)  tr(d=2)  alternating\n", r.seed);
            for ((i, j), t) in &r.pair_traces {
                let [a0, a1, a2] = t.traces;
                s.push_str(&format!(
                    "({i},{j})   {a0:>7.4}  {a1:>7.4}  {a2:>7.4}  {:.1e}\n",
                    t.alternating_sum
                ));
            }
            s.push_str(&format!("max |alternating sum| (pairs and mixtures): {:.1e}\n", r.max_trace_alternating));
            s.push_str(&format!(
                "determinant ratio over {} random sequences: max |ratio - 1| = {:.1e}\n",
                r.random_trials, r.max_determinant_deviation
            ));
            s.push_str(&format!(
                "entangling phase over {} diagonal sequences: max = {:.1e} ({} not diagonal)\n",
                r.diagonal_trials, r.max_entangling_phase, r.non_diagonal
            ));
            s.push_str(&format!("U4(pi) entangling phase: {:.1e}\n", r.u4_entangling_phase));
            s.push_str(&format!("no-go checks: {}\n", if passed { "pass" } else { "FAIL" }));
            s
        }
    };
    emit(a.output.out.as_deref(), &body, stdout)?;
    Ok(if passed { EXIT_PASS } else { EXIT_FAIL })
}
