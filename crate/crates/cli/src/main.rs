use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use slackprime::emit::fmt_sig;
use slackprime::gaps::{estimates, gap_records, write_gap_csv, GapRecord};
use slackprime::harness::{
    run_campaign_with, CampaignConfig, CampaignKind, CampaignReport, MethodMode,
};
use slackprime::next_prime::{NextPrimeResult, SlackMethod};
use slackprime::oracle::{
    first_primes, is_prime_trial, prime_count_with, sieve_upto_with, MemBudget,
};
use slackprime::twin::{is_twin_leader, twin_pairs_upto, write_twin_csv, TwinReport};
use slackprime::Error;

const EXIT_IO: u8 = 1;
const EXIT_INVALID: u8 = 3;
const EXIT_CAPACITY: u8 = 4;
const EXIT_DISCREPANCY: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "slackprime",
    version,
    about = "Slack-based successor primes, gap bounds and twin constraints"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Write output to this file (`verify` and `bench`: a directory for report files)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Successor of a prime p >= 5 by the slack method
    Next { p: u64 },
    /// Slack list of a prime p >= 5
    Slacks { p: u64 },
    /// Twin pairs up to a bound, or the constraint verdict for one prime
    Twins(TwinsArgs),
    /// Consecutive prime gaps with merit, bound and maximal flags
    Gaps(GapsArgs),
    /// Run a verification campaign against the sieve oracle
    Verify(VerifyArgs),
    /// Time the slack method against sieving
    Bench(BenchArgs),
    /// Classical gap estimates at a prime
    Estimate { p: u64 },
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("target").required(true).args(["upto", "check"])))]
struct TwinsArgs {
    /// List pairs (p, p + 2) with p + 2 <= U
    #[arg(long, value_name = "U")]
    upto: Option<u64>,
    /// Report the R-constraint verdict for a single prime
    #[arg(long, value_name = "P")]
    check: Option<u64>,
    /// Also list (3, 5), which the constraints do not cover
    #[arg(long, requires = "upto")]
    include_three: bool,
}

#[derive(Args, Debug)]
struct GapsArgs {
    /// Gaps between consecutive primes not exceeding N
    #[arg(
        long,
        value_name = "N",
        group = "range",
        required_unless_present = "count"
    )]
    upto: Option<u64>,
    /// Gaps following the first N primes
    #[arg(long, value_name = "N", group = "range")]
    count: Option<u64>,
    /// Only emit records that set a new maximum
    #[arg(long)]
    maximal_only: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    NextPrime,
    GapBound,
    Twin,
}

impl From<VerifyKind> for CampaignKind {
    fn from(k: VerifyKind) -> Self {
        match k {
            VerifyKind::NextPrime => CampaignKind::NextPrime,
            VerifyKind::GapBound => CampaignKind::GapBound,
            VerifyKind::Twin => CampaignKind::Twin,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Faithful,
    Fast,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    kind: VerifyKind,
    /// First prime index (1-based)
    #[arg(long, default_value_t = 3)]
    start: u64,
    /// Number of primes to check
    #[arg(long, default_value_t = 10_000)]
    count: u64,
    /// Replicate the full published run: indices 3 through 100000
    #[arg(long, conflicts_with_all = ["start", "count"])]
    replicate: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Primes per checkpointed chunk
    #[arg(long, default_value_t = 10_000)]
    checkpoint_every: u64,
    /// Checkpoint file; an existing one is resumed
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Faithful)]
    mode: Mode,
    /// Feed each claimed successor into the next step
    #[arg(long)]
    chain: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Scales to sample primes from
    #[arg(long, value_delimiter = ',', default_values_t = [1_000u64, 10_000, 100_000, 1_000_000])]
    scales: Vec<u64>,
    /// Primes timed per scale
    #[arg(long, default_value_t = 50)]
    count: u64,
}

/// Failures carry the exit code of their class.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Capacity { .. } => EXIT_CAPACITY,
            Error::Io(_) => EXIT_IO,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

type CmdResult = Result<u8, Failure>;

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("slackprime: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let budget = MemBudget::from_env()?;
    match &cli.command {
        Command::Verify(args) => return verify(cli, args, budget),
        Command::Bench(args) => return bench(cli, args, budget),
        _ => {}
    }
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let code = match &cli.command {
        Command::Next { p } => next(&mut out, cli.format, *p, budget),
        Command::Slacks { p } => slacks(&mut out, cli.format, *p, budget),
        Command::Twins(args) => twins(&mut out, cli.format, args, budget),
        Command::Gaps(args) => gaps(&mut out, cli.format, args, budget),
        Command::Estimate { p } => estimate(&mut out, cli.format, *p, budget),
        Command::Verify(_) | Command::Bench(_) => unreachable!(),
    }?;
    out.flush()?;
    Ok(code)
}

fn require_prime(p: u64) -> Result<(), Failure> {
    if p < 5 {
        return Err(invalid(format!("expected a prime >= 5, got {p}")));
    }
    if !is_prime_trial(p) {
        return Err(Error::NotPrime {
            n: p,
            witness: None,
        }
        .into());
    }
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn next(out: &mut dyn Write, format: Format, p: u64, budget: MemBudget) -> CmdResult {
    require_prime(p)?;
    let r: NextPrimeResult = SlackMethod::with_budget(budget).next_faithful(p)?;
    match format {
        Format::Json => write_json(out, &r)?,
        Format::Csv => {
            writeln!(out, "p,e,successor,used_beyond_range")?;
            writeln!(
                out,
                "{},{},{},{}",
                r.p, r.e, r.successor, r.used_beyond_range
            )?;
        }
        Format::Text => {
            let how = if r.used_beyond_range {
                " (beyond range)"
            } else {
                ""
            };
            writeln!(out, "{} -> {}  E = {}{how}", r.p, r.successor, r.e)?;
        }
    }
    Ok(0)
}

fn slacks(out: &mut dyn Write, format: Format, p: u64, budget: MemBudget) -> CmdResult {
    require_prime(p)?;
    let mut method = SlackMethod::with_budget(budget);
    method.next_faithful(p)?;
    let entries = method.list().entries();
    match format {
        Format::Json => write_json(out, &json!({ "p": p, "entries": entries }))?,
        Format::Csv => {
            writeln!(out, "divisor,slack")?;
            for e in entries {
                writeln!(out, "{},{}", e.divisor, e.slack)?;
            }
        }
        Format::Text => {
            writeln!(out, "{:>10} {:>10}", "divisor", "slack")?;
            for e in entries {
                writeln!(out, "{:>10} {:>10}", e.divisor, e.slack)?;
            }
        }
    }
    Ok(0)
}

fn twins(out: &mut dyn Write, format: Format, args: &TwinsArgs, budget: MemBudget) -> CmdResult {
    if let Some(p) = args.check {
        require_prime(p)?;
        let report: TwinReport = is_twin_leader(p)?;
        match format {
            Format::Json => write_json(out, &report)?,
            Format::Csv => {
                let v: Vec<String> = report.violations.iter().map(u64::to_string).collect();
                writeln!(out, "p,verdict,violations")?;
                writeln!(out, "{},{},{}", report.p, report.verdict, v.join(";"))?;
            }
            Format::Text if report.verdict => writeln!(out, "{p}: twin leader with {}", p + 2)?,
            Format::Text => writeln!(
                out,
                "{p}: not a twin leader, violated at d = {:?}",
                report.violations
            )?,
        }
        return Ok(0);
    }
    let u = args.upto.expect("clap requires --upto or --check");
    let pairs = twin_pairs_upto(u, args.include_three, budget)?;
    match format {
        Format::Json => write_json(
            out,
            &json!({ "upto": u, "count": pairs.len(), "pairs": pairs }),
        )?,
        Format::Csv => write_twin_csv(&mut *out, &pairs)?,
        Format::Text => {
            for (p, q) in &pairs {
                writeln!(out, "({p}, {q})")?;
            }
            writeln!(out, "{} pairs", pairs.len())?;
        }
    }
    Ok(0)
}

fn gaps(out: &mut dyn Write, format: Format, args: &GapsArgs, budget: MemBudget) -> CmdResult {
    let primes = match (args.upto, args.count) {
        (Some(n), _) => {
            if n < 3 {
                return Err(invalid(format!(
                    "--upto needs at least two primes, got {n}"
                )));
            }
            sieve_upto_with(n, budget)?.primes()
        }
        (None, Some(n)) => {
            let n = usize::try_from(n).map_err(|_| invalid("--count too large"))?;
            if n == 0 {
                return Err(invalid("--count must be at least 1"));
            }
            first_primes(n + 1, budget)?
        }
        (None, None) => unreachable!("clap requires a range"),
    };
    let mut records: Vec<GapRecord> = gap_records(&primes, 1)?;
    if args.maximal_only {
        records.retain(|r| r.is_maximal);
    }
    match format {
        Format::Json => {
            let rows: Vec<_> = records
                .iter()
                .map(|r| {
                    json!({
                        "i": r.index,
                        "p_i": r.p_i,
                        "p_next": r.p_next,
                        "gap": r.gap,
                        "merit": round_sig(r.merit),
                        "bound_paper": r.bound_paper,
                        "within_paper_bound": r.within_paper_bound,
                        "is_maximal": r.is_maximal,
                    })
                })
                .collect();
            write_json(out, &json!({ "records": rows }))?;
        }
        Format::Csv => write_gap_csv(&mut *out, &records)?,
        Format::Text => {
            for r in &records {
                let mark = if r.is_maximal { "  *" } else { "" };
                writeln!(
                    out,
                    "{:>8} {:>12} {:>12} {:>6} {:>14}{mark}",
                    r.index,
                    r.p_i,
                    r.p_next,
                    r.gap,
                    fmt_sig(r.merit)
                )?;
            }
        }
    }
    Ok(0)
}

/// A real rounded to the shared significant-digit convention, as a JSON number.
fn round_sig(x: f64) -> serde_json::Value {
    let text = fmt_sig(x);
    match text.parse::<f64>() {
        Ok(v) => json!(v),
        Err(_) => json!(text),
    }
}

fn estimate(out: &mut dyn Write, format: Format, p: u64, budget: MemBudget) -> CmdResult {
    if p < 2 || !is_prime_trial(p) {
        return Err(Error::NotPrime {
            n: p,
            witness: None,
        }
        .into());
    }
    let pi = prime_count_with(p, budget)?;
    let e = estimates(p, pi)?;
    let fields = [
        ("cramer", e.cramer),
        ("shanks", e.shanks),
        ("wolf", e.wolf),
        ("gauss_pi", e.gauss_pi),
    ];
    match format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("p".into(), json!(p));
            obj.insert("pi".into(), json!(pi));
            for (k, v) in fields {
                obj.insert(k.into(), round_sig(v));
            }
            write_json(out, &obj)?;
        }
        Format::Csv => {
            writeln!(out, "p,pi,cramer,shanks,wolf,gauss_pi")?;
            let vals: Vec<String> = fields.iter().map(|(_, v)| fmt_sig(*v)).collect();
            writeln!(out, "{p},{pi},{}", vals.join(","))?;
        }
        Format::Text => {
            writeln!(out, "p = {p}, pi(p) = {pi}")?;
            for (k, v) in fields {
                writeln!(out, "{k:>9}: {}", fmt_sig(v))?;
            }
        }
    }
    Ok(0)
}

fn output_dir(cli: &Cli) -> Result<PathBuf, Failure> {
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn print_report(format: Format, report: &CampaignReport, dir: &Path) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => write_json(&mut out, report)?,
        Format::Csv => {
            writeln!(out, "kind,primes_checked,discrepancies,beyond_range_uses,max_observed_gap,max_observed_E,wall_time_secs")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                report.config.kind,
                report.primes_checked,
                report.discrepancies.len(),
                report.beyond_range_uses,
                report.max_observed_gap,
                report.max_observed_e,
                fmt_sig(report.wall_time_secs)
            )?;
        }
        Format::Text => {
            let cfg = &report.config;
            writeln!(
                out,
                "{} campaign, indices {}..{}",
                cfg.kind,
                cfg.start_index,
                cfg.start_index + cfg.count - 1
            )?;
            writeln!(out, "  primes checked     {}", report.primes_checked)?;
            writeln!(out, "  discrepancies      {}", report.discrepancies.len())?;
            match cfg.kind {
                CampaignKind::NextPrime => {
                    writeln!(out, "  max observed E     {}", report.max_observed_e)?;
                    writeln!(out, "  beyond-range uses  {}", report.beyond_range_uses)?;
                }
                CampaignKind::GapBound => {
                    writeln!(out, "  max observed gap   {}", report.max_observed_gap)?
                }
                CampaignKind::Twin => writeln!(
                    out,
                    "  twin leaders       {}",
                    report.twin_leaders.unwrap_or(0)
                )?,
                CampaignKind::Bench => {}
            }
            writeln!(
                out,
                "  wall time          {} s",
                fmt_sig(report.wall_time_secs)
            )?;
            writeln!(out, "  written to         {}", dir.display())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn verify(cli: &Cli, args: &VerifyArgs, budget: MemBudget) -> CmdResult {
    let dir = output_dir(cli)?;
    let (start, count) = if args.replicate {
        (3, 99_998)
    } else {
        (args.start, args.count)
    };
    let mut cfg = CampaignConfig::new(args.kind.into(), start, count)
        .with_workers(args.workers)
        .with_checkpoint_every(args.checkpoint_every)
        .with_mode(match args.mode {
            Mode::Faithful => MethodMode::Faithful,
            Mode::Fast => MethodMode::Fast,
        })
        .with_chain(args.chain)
        .with_output(&dir);
    if let Some(ck) = &args.checkpoint {
        cfg = cfg.with_checkpoint(ck);
    }
    let report = run_campaign_with(cfg, budget)?;
    print_report(cli.format, &report, &dir)?;
    if report.is_clean() {
        Ok(0)
    } else {
        eprintln!(
            "slackprime: {} discrepancies, see {}",
            report.discrepancies.len(),
            dir.join("discrepancies.jsonl").display()
        );
        Ok(EXIT_DISCREPANCY)
    }
}

fn bench(cli: &Cli, args: &BenchArgs, budget: MemBudget) -> CmdResult {
    let dir = output_dir(cli)?;
    let mut cfg = CampaignConfig::new(CampaignKind::Bench, 3, args.count).with_output(&dir);
    cfg.bench_scales = args.scales.clone();
    let report = run_campaign_with(cfg, budget)?;
    let rows = report.bench.clone().unwrap_or_default();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let growth = |g: Option<f64>| g.map(fmt_sig).unwrap_or_default();
    match cli.format {
        Format::Json => write_json(&mut out, &rows)?,
        Format::Csv => {
            writeln!(out, "scale,samples,first_sample,slack_ns_per_prime,sieve_ns_per_prime,slack_growth,sieve_growth")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.scale,
                    r.samples,
                    r.first_sample,
                    fmt_sig(r.slack_ns_per_prime),
                    fmt_sig(r.sieve_ns_per_prime),
                    growth(r.slack_growth),
                    growth(r.sieve_growth)
                )?;
            }
        }
        Format::Text => {
            writeln!(
                out,
                "{:>10} {:>16} {:>16} {:>8} {:>8}",
                "scale", "slack ns/prime", "sieve ns/prime", "x slack", "x sieve"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>10} {:>16.0} {:>16.2} {:>8} {:>8}",
                    r.scale,
                    r.slack_ns_per_prime,
                    r.sieve_ns_per_prime,
                    r.slack_growth
                        .map(|g| format!("{g:.2}"))
                        .unwrap_or_default(),
                    r.sieve_growth
                        .map(|g| format!("{g:.2}"))
                        .unwrap_or_default()
                )?;
            }
        }
    }
    out.flush()?;
    Ok(if report.is_clean() {
        0
    } else {
        EXIT_DISCREPANCY
    })
}
