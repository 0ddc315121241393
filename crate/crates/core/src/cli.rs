//! Command-line front end.
//!
//! Exit codes: 0 on success or a passing check, 1 when a checked property
//! fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex;
use num_rational::Rational64;

use crate::adt::{adt_computing_bound_nf, adt_feedback_region, adt_nonfeedback_region};
use crate::certify::{certify_claim1, certify_m_tx_gap, certify_rank_exhaustive, CertSummary};
use crate::channel::{
    db_to_linear, load_adt_channel, load_gaussian_channel, parse_matrix, CorrelationParam, CovarianceParam,
    GaussianChannel, RateVector,
};
use crate::error::{Error, Result};
use crate::gaussian::{
    gap_report_2tx, gap_report_mtx, inner_region, naive_feedback_region, outer_region_cov, outer_region_scalar,
    sym_capacity_bounds, DEFAULT_RHO_STEP,
};
use crate::sim::{fig4_strategy, parse_bits, run_function_computation, run_session, verify_multicast_decoding, SourceBits};
use crate::sweeps::{sweep_gain, sweep_gap, Axis, SweepSpec};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "FBCAP_THREADS";

const FIG4_LEVELS: &str = "3,1;1,3";

#[derive(Debug, Parser)]
#[command(name = "fbcap", version, about = "Feedback capacity bounds for multicast channels")]
struct Cli {
    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a rate region.
    #[command(subcommand)]
    Region(RegionCmd),
    /// Constraint-wise gap between the outer and inner bounds.
    Gap(GapArgs),
    #[command(subcommand)]
    Sweep(SweepCmd),
    /// Run a feedback scheme on the deterministic channel.
    #[command(subcommand)]
    Sim(SimCmd),
    /// Randomized or exhaustive property checks.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Debug, Args)]
struct ChannelArgs {
    /// JSON channel document with "gains" or "snr_db".
    #[arg(long, conflicts_with = "snr_db", required_unless_present = "snr_db")]
    channel: Option<PathBuf>,
    /// SNR matrix in dB, receivers as rows: "a,b;c,d".
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<String>,
}

impl ChannelArgs {
    fn load(&self) -> Result<GaussianChannel<f64>> {
        match (&self.channel, &self.snr_db) {
            (Some(path), _) => load_gaussian_channel(&std::fs::read_to_string(path)?),
            (None, Some(spec)) => {
                let db = parse_matrix(spec, |row, col, tok| {
                    tok.parse::<f64>().map_err(|_| Error::Malformed(format!("entry ({row},{col}) {tok:?}")))
                })?;
                let linear: Vec<Vec<f64>> =
                    db.iter().map(|r| r.iter().map(|&x| db_to_linear(x)).collect()).collect();
                GaussianChannel::from_snr(&linear)
            }
            (None, None) => Err(Error::Malformed("no channel given".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Bound {
    Inner,
    Outer,
    Naive,
}

#[derive(Debug, Subcommand)]
enum RegionCmd {
    /// Inner, outer or naive region of a Gaussian channel at one correlation,
    /// or its symmetric capacities when no correlation is given.
    Gaussian {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, value_enum, default_value = "inner")]
        bound: Bound,
        /// Covariance matrix for the outer bound, "1,0.5;0.5,1".
        #[arg(long)]
        cov: Option<String>,
        #[arg(long, default_value_t = DEFAULT_RHO_STEP)]
        rho_step: f64,
        #[arg(long)]
        json: bool,
    },
    /// Feedback (or nonfeedback) capacity region of a deterministic channel.
    Adt {
        /// Link levels, receivers as rows: "3,1;1,3".
        #[arg(long)]
        levels: String,
        #[arg(long)]
        nonfeedback: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct GapArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Common correlation; exchangeable covariance for more than two transmitters.
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    /// Explicit covariance (any number of transmitters).
    #[arg(long)]
    cov: Option<String>,
}

#[derive(Debug, Subcommand)]
enum SweepCmd {
    /// Symmetric inner/outer capacity gap over an SNR grid (CSV).
    Gap {
        #[arg(long, default_value = "0:50:5")]
        snr1_db: String,
        #[arg(long, default_value = "0:50:5")]
        snr2_db: String,
        #[arg(long, default_value_t = DEFAULT_RHO_STEP)]
        rho_step: f64,
    },
    /// Normalized feedback and nonfeedback symmetric capacities against α (CSV).
    Gain {
        #[arg(long, default_value_t = 80.0)]
        base_db: f64,
        #[arg(long, default_value = "0.1:1.0:0.1")]
        alpha: String,
        #[arg(long, default_value_t = DEFAULT_RHO_STEP)]
        rho_step: f64,
    },
}

#[derive(Debug, Subcommand)]
enum SimCmd {
    /// Two-slot feedback scheme on levels 3,1;1,3 with 6 message bits.
    Fig4 {
        /// a1 a2 A1 b1 b2 B1.
        #[arg(long)]
        messages: String,
        #[arg(long)]
        json: bool,
    },
    /// Modulo-2 sum of two 3-bit sources over the same scheme.
    Compute {
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
    },
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    /// Per-transmitter gap for M transmitters over random channels.
    GapM {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Conditional-covariance eigenvalue bound over random correlations.
    Claim1 {
        /// Largest number of transmitters drawn.
        #[arg(long, default_value_t = 5)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// GF(2) elimination rank against span enumeration.
    Rank {
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn parse_cov(spec: &str) -> Result<CovarianceParam<f64>> {
    let rows = parse_matrix(spec, |row, col, tok| {
        tok.parse::<f64>().map_err(|_| Error::Malformed(format!("covariance entry ({row},{col}) {tok:?}")))
    })?;
    let n = rows.len();
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Ragged { row, found: r.len(), expected: n });
    }
    CovarianceParam::new(DMatrix::from_fn(n, n, |i, j| Complex::new(rows[i][j], 0.0)))
}

fn region_gaussian(
    out: &mut String,
    ch: &GaussianChannel<f64>,
    rho: Option<f64>,
    bound: Bound,
    cov: Option<&str>,
    rho_step: f64,
    json: bool,
) -> Result<Outcome> {
    let Some(rho) = rho else {
        let cap = sym_capacity_bounds(ch, rho_step)?;
        if json {
            let v = serde_json::json!({
                "c_sym_inner": cap.inner, "rho_inner": cap.rho_inner,
                "c_sym_outer": cap.outer, "rho_outer": cap.rho_outer, "gap": cap.gap,
            });
            writeln!(out, "{v}").unwrap();
        } else {
            writeln!(out, "inner symmetric capacity {:.6} bits at rho={:.6}", cap.inner, cap.rho_inner).unwrap();
            writeln!(out, "outer symmetric capacity {:.6} bits at rho={:.6}", cap.outer, cap.rho_outer).unwrap();
            writeln!(out, "gap {:.6} bits", cap.gap).unwrap();
        }
        return Ok(Outcome::Pass);
    };
    let rho = CorrelationParam::new(rho)?;
    let region = match (bound, cov) {
        (Bound::Inner, _) => inner_region(ch, rho),
        (Bound::Naive, _) => naive_feedback_region(ch, rho)?,
        (Bound::Outer, Some(spec)) => outer_region_cov(ch, &parse_cov(spec)?)?,
        (Bound::Outer, None) if ch.num_tx() == 2 => outer_region_scalar(ch, rho)?,
        (Bound::Outer, None) => outer_region_cov(ch, &CovarianceParam::exchangeable(ch.num_tx(), rho))?,
    };
    if json {
        writeln!(out, "{}", region.to_json()).unwrap();
    } else {
        write!(out, "{region}").unwrap();
        writeln!(out, "sym rate {:.6} bits", region.sym_rate()).unwrap();
    }
    Ok(Outcome::Pass)
}

fn region_adt(out: &mut String, levels: &str, nonfeedback: bool, json: bool) -> Result<Outcome> {
    let ch = load_adt_channel(levels)?;
    let region = if nonfeedback { adt_nonfeedback_region(&ch) } else { adt_feedback_region(&ch) };
    if json {
        writeln!(out, "{}", region.to_json()).unwrap();
    } else {
        writeln!(out, "{}", region.summary()).unwrap();
        writeln!(out, "sym rate {}", region.sym_rate()).unwrap();
    }
    Ok(Outcome::Pass)
}

fn gap(out: &mut String, args: &GapArgs) -> Result<Outcome> {
    let ch = args.channel.load()?;
    let report = match &args.cov {
        Some(spec) => gap_report_mtx(&ch, &parse_cov(spec)?)?,
        None if ch.num_tx() == 2 => gap_report_2tx(&ch, CorrelationParam::new(args.rho)?)?,
        None => gap_report_mtx(&ch, &CovarianceParam::exchangeable(ch.num_tx(), CorrelationParam::new(args.rho)?))?,
    };
    writeln!(out, "{}", report.to_json()).unwrap();
    Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
}

fn sweep(out: &mut String, cmd: &SweepCmd) -> Result<Outcome> {
    match cmd {
        SweepCmd::Gap { snr1_db, snr2_db, rho_step } => {
            let spec = SweepSpec {
                snr1_db: snr1_db.parse::<Axis>()?,
                snr2_db: snr2_db.parse::<Axis>()?,
                rho_step: *rho_step,
                ..SweepSpec::default()
            };
            let result = sweep_gap(&spec)?;
            out.push_str(&result.to_csv());
            Ok(if result.violations().is_empty() { Outcome::Pass } else { Outcome::Fail })
        }
        SweepCmd::Gain { base_db, alpha, rho_step } => {
            let spec = SweepSpec {
                base_db: *base_db,
                alpha: alpha.parse::<Axis>()?,
                rho_step: *rho_step,
                ..SweepSpec::default()
            };
            out.push_str(&sweep_gain(&spec)?.to_csv());
            Ok(Outcome::Pass)
        }
    }
}

fn sim_fig4(out: &mut String, messages: &str, json: bool) -> Result<Outcome> {
    let bits = parse_bits(messages)?;
    if bits.len() != 6 {
        return Err(Error::Malformed(format!("expected 6 message bits, got {}", bits.len())));
    }
    let ch = load_adt_channel(FIG4_LEVELS)?;
    let trace = run_session(&ch, &fig4_strategy(), &[bits[..3].to_vec(), bits[3..].to_vec()])?;
    if json {
        writeln!(out, "{}", trace.to_json()).unwrap();
    } else {
        out.push_str(&trace.to_text());
    }
    let rates = match verify_multicast_decoding(&trace) {
        Ok(r) => r,
        Err(e) => {
            writeln!(out, "decoding failed: {e}").unwrap();
            return Ok(Outcome::Fail);
        }
    };
    let zero = Rational64::from_integer(0);
    if !adt_feedback_region(&ch).contains(&rates, zero)? || !trace.audit_channel_law() {
        writeln!(out, "rate {} outside the feedback region", format_rates(&rates)).unwrap();
        return Ok(Outcome::Fail);
    }
    if !json {
        writeln!(out, "rate {} verified", format_rates(&rates)).unwrap();
    }
    Ok(Outcome::Pass)
}

fn format_rates(r: &RateVector<Rational64>) -> String {
    let parts: Vec<String> = r
        .as_slice()
        .iter()
        .map(|x| (*x.numer() as f64 / *x.denom() as f64).to_string())
        .collect();
    format!("({})", parts.join(","))
}

fn sim_compute(out: &mut String, s1: &str, s2: &str) -> Result<Outcome> {
    let ch = load_adt_channel(FIG4_LEVELS)?;
    let sources = SourceBits::new(parse_bits(s1)?, parse_bits(s2)?)?;
    let outcome = run_function_computation(&ch, &fig4_strategy(), &sources)?;
    for (k, sum) in outcome.sums.iter().enumerate() {
        let s: String = sum.iter().map(|&b| if b { '1' } else { '0' }).collect();
        writeln!(out, "rx{} S1^S2={s}", k + 1).unwrap();
    }
    let bound = adt_computing_bound_nf(&ch)?;
    writeln!(
        out,
        "computing rate {} bits/use (nonfeedback bound {bound}), {}",
        outcome.rate,
        if outcome.success { "all receivers correct" } else { "FAILED" }
    )
    .unwrap();
    Ok(if outcome.success { Outcome::Pass } else { Outcome::Fail })
}

fn report_cert(out: &mut String, summary: &CertSummary, what: &str) -> Outcome {
    if summary.passed() {
        writeln!(out, "pass: {what} ({} trials, {} checks)", summary.trials, summary.checks).unwrap();
        Outcome::Pass
    } else {
        writeln!(
            out,
            "FAIL: {} of {} checks; first: {}",
            summary.failures,
            summary.checks,
            summary.first_failure.as_deref().unwrap_or("?")
        )
        .unwrap();
        Outcome::Fail
    }
}

fn check(out: &mut String, cmd: &CheckCmd) -> Result<Outcome> {
    match *cmd {
        CheckCmd::GapM { m, trials, seed } => {
            if !(2..=12).contains(&m) {
                return Err(Error::InvalidParameter(format!("--m must lie in 2..=12, got {m}")));
            }
            let bound = (2.0 * (m as f64 - 1.0)).log2();
            let s = certify_m_tx_gap(m, trials, seed)?;
            Ok(report_cert(out, &s, &format!("max per-tx gap {:.3} ≤ {bound:.3}", s.max_per_transmitter)))
        }
        CheckCmd::Claim1 { m, trials, seed } => {
            if !(2..=12).contains(&m) {
                return Err(Error::InvalidParameter(format!("--m must lie in 2..=12, got {m}")));
            }
            let s = certify_claim1(m, trials, seed)?;
            Ok(report_cert(out, &s, &format!("worst eigenvalue margin {:.3e}", s.worst_margin)))
        }
        CheckCmd::Rank { max_dim } => {
            if !(1..=4).contains(&max_dim) {
                return Err(Error::InvalidParameter(format!("--max-dim must lie in 1..=4, got {max_dim}")));
            }
            let s = certify_rank_exhaustive(max_dim);
            Ok(report_cert(out, &s, &format!("{} matrices agree", s.checks)))
        }
    }
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<Outcome> {
    match &cli.command {
        Command::Region(RegionCmd::Gaussian { channel, rho, bound, cov, rho_step, json }) => {
            region_gaussian(out, &channel.load()?, *rho, *bound, cov.as_deref(), *rho_step, *json)
        }
        Command::Region(RegionCmd::Adt { levels, nonfeedback, json }) => region_adt(out, levels, *nonfeedback, *json),
        Command::Gap(args) => gap(out, args),
        Command::Sweep(cmd) => sweep(out, cmd),
        Command::Sim(SimCmd::Fig4 { messages, json }) => sim_fig4(out, messages, *json),
        Command::Sim(SimCmd::Compute { s1, s2 }) => sim_compute(out, s1, s2),
        Command::Check(cmd) => check(out, cmd),
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs the CLI with explicit output streams; returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut out = String::new();
    let result = match thread_cap() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut out)),
            Err(e) => Err(Error::InvalidParameter(format!("{THREADS_ENV}: {e}"))),
        },
        None => dispatch(&cli, &mut out),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &out),
        None => stdout.write_all(out.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    match result {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Entry point over the process's stdout/stderr.
pub fn cli_main<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    run(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("fbcap").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn region_adt_prints_summary() {
        let (code, out, _) = run_capture(&["region", "adt", "--levels", "3,1;1,3"]);
        assert_eq!(code, 0);
        assert!(out.contains("{R1≤3, R2≤3, R1+R2≤3}"), "{out}");
        assert!(out.contains("sym rate 3/2"));
    }

    #[test]
    fn fig4_trace_and_verdict() {
        let (code, out, _) = run_capture(&["sim", "fig4", "--messages", "101011"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("t=1 X1=110 X2=010"), "{out}");
        assert!(out.contains("rate (1.5,1.5) verified"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["region", "adt"]).0, 2);
        assert_eq!(run_capture(&["region", "adt", "--levels", "3,x"]).0, 2);
        assert_eq!(run_capture(&["sim", "fig4", "--messages", "10"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn compute_reports_xor() {
        let (code, out, _) = run_capture(&["sim", "compute", "--s1", "101", "--s2", "011"]);
        assert_eq!(code, 0);
        assert!(out.contains("rx1 S1^S2=110") && out.contains("rx2 S1^S2=110"), "{out}");
        assert!(out.contains("computing rate 3/2"));
    }

    #[test]
    fn gap_check_small() {
        let (code, out, _) = run_capture(&["check", "gap-m", "--m", "3", "--trials", "50", "--seed", "7"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("pass: max per-tx gap "), "{out}");
        assert!(out.contains("≤ 2.000"));
    }

    #[test]
    fn gaussian_region_at_rho() {
        let (code, out, _) = run_capture(&["region", "gaussian", "--snr-db", "0,0;0,0", "--rho", "0.5"]);
        assert_eq!(code, 0);
        assert!(out.contains("S={1,2}"), "{out}");
        let (code, out, _) = run_capture(&["gap", "--snr-db", "10,0;0,10", "--rho", "0.3"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"pass\":true"), "{out}");
    }
}
