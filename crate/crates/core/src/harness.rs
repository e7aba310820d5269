//! Campaigns that check the slack method, the gap bound and the twin
//! constraints against the oracles over ranges of prime indices.
//!
//! A campaign covers indices `[start_index, start_index + count)`, where
//! index `i` names the i-th prime (`P_1 = 2`). The range is processed in
//! chunks of `checkpoint_every` primes; each chunk is split into contiguous
//! blocks, one per worker, and the block outcomes are merged in index order.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::checkpoint::{Checkpoint, CheckpointHeader, CheckpointWriter, CHECKPOINT_VERSION};
use crate::error::{Error, Result};
use crate::gaps::gap_record;
use crate::next_prime::{successor_upper_bound, SlackMethod};
use crate::oracle::{first_primes, is_prime_trial, sieve_upto_with, MemBudget};
use crate::twin::twin_verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CampaignKind {
    NextPrime,
    GapBound,
    Twin,
    Bench,
}

impl CampaignKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CampaignKind::NextPrime => "next-prime",
            CampaignKind::GapBound => "gap-bound",
            CampaignKind::Twin => "twin",
            CampaignKind::Bench => "bench",
        }
    }

    fn min_start_index(self) -> u64 {
        match self {
            CampaignKind::GapBound => 1,
            _ => 3,
        }
    }
}

impl fmt::Display for CampaignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CampaignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "next-prime" => Ok(CampaignKind::NextPrime),
            "gap-bound" => Ok(CampaignKind::GapBound),
            "twin" => Ok(CampaignKind::Twin),
            "bench" => Ok(CampaignKind::Bench),
            other => Err(Error::Config(format!("unknown campaign kind {other:?}"))),
        }
    }
}

/// How the slack method is evaluated during a next-prime campaign.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodMode {
    /// Builds the full slack list for every prime.
    #[default]
    Faithful,
    /// Tracks only the even-slack presence set.
    Fast,
}

impl FromStr for MethodMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "faithful" => Ok(MethodMode::Faithful),
            "fast" => Ok(MethodMode::Fast),
            other => Err(Error::Config(format!("unknown method mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub kind: CampaignKind,
    pub start_index: u64,
    pub count: u64,
    pub worker_count: usize,
    /// Primes per checkpointed chunk; 0 processes the range as one chunk.
    pub checkpoint_every: u64,
    /// Directory receiving `report.json` and `discrepancies.jsonl`.
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub checkpoint_path: Option<PathBuf>,
    #[serde(default)]
    pub mode: MethodMode,
    /// Feed each successor back in as the next input instead of taking
    /// inputs from the oracle stream. Forces a single worker.
    #[serde(default)]
    pub chain: bool,
    /// Scales sampled by the bench campaign.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bench_scales: Vec<u64>,
}

pub const DEFAULT_BENCH_SCALES: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];

impl CampaignConfig {
    pub fn new(kind: CampaignKind, start_index: u64, count: u64) -> Self {
        CampaignConfig {
            kind,
            start_index,
            count,
            worker_count: 1,
            checkpoint_every: 0,
            output_path: None,
            checkpoint_path: None,
            mode: MethodMode::Faithful,
            chain: false,
            bench_scales: if kind == CampaignKind::Bench {
                DEFAULT_BENCH_SCALES.to_vec()
            } else {
                Vec::new()
            },
        }
    }

    pub fn with_workers(mut self, n: usize) -> Self {
        self.worker_count = n;
        self
    }

    pub fn with_checkpoint_every(mut self, n: u64) -> Self {
        self.checkpoint_every = n;
        self
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint_path = Some(path.into());
        self
    }

    pub fn with_output(mut self, dir: impl Into<PathBuf>) -> Self {
        self.output_path = Some(dir.into());
        self
    }

    pub fn with_mode(mut self, mode: MethodMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_chain(mut self, chain: bool) -> Self {
        self.chain = chain;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let min = self.kind.min_start_index();
        if self.start_index < min {
            return Err(Error::Config(format!(
                "{} campaigns start at index {min} or later, got {}",
                self.kind, self.start_index
            )));
        }
        if self.count == 0 {
            return Err(Error::Config("count must be at least 1".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::Config("worker_count must be at least 1".into()));
        }
        if self.kind == CampaignKind::Bench && self.bench_scales.iter().any(|&s| s < 5) {
            return Err(Error::Config("bench scales must be >= 5".into()));
        }
        self.start_index
            .checked_add(self.count)
            .ok_or_else(|| Error::Config("index range overflows".into()))?;
        Ok(())
    }

    fn end_index(&self) -> u64 {
        self.start_index + self.count
    }

    fn header(&self) -> CheckpointHeader {
        CheckpointHeader {
            version: CHECKPOINT_VERSION,
            kind: self.kind,
            start_index: self.start_index,
            count: self.count,
            mode: self.mode,
            chain: self.chain,
            checkpoint_every: self.checkpoint_every,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    NextPrime,
    GapBound,
    TwinVerdict,
    Eq5Bound,
}

/// A value on either side of a discrepancy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClaimValue {
    Int(u64),
    Bool(bool),
}

/// One mismatch between the slack method (or a bound derived from it) and
/// the oracle.
///
/// * `next-prime`: claimed successor vs oracle successor.
/// * `eq5-bound`: claimed successor vs the ceiling `p + (p-1)/2 + 1`.
/// * `gap-bound`: claimed maximum gap `floor((p+1)/2)` vs observed gap.
/// * `twin-verdict`: R-constraint verdict vs primality of `p + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    pub index: u64,
    pub p_i: u64,
    pub claimed: ClaimValue,
    pub oracle: ClaimValue,
    pub claim_kind: ClaimKind,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WorkerTiming {
    pub worker: usize,
    pub first_index: u64,
    pub count: u64,
    pub elapsed_secs: f64,
}

/// Merged outcome of one chunk; also the checkpoint record.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChunkRecord {
    pub first_index: u64,
    pub count: u64,
    pub discrepancies: Vec<DiscrepancyRecord>,
    pub beyond_range_uses: u64,
    pub max_gap: u64,
    pub max_e: u64,
    pub twin_leaders: u64,
    /// Successor produced for the last index; seeds the next chunk in chain mode.
    #[serde(default)]
    pub last_claimed: u64,
    pub workers: Vec<WorkerTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub scale: u64,
    pub samples: u64,
    pub first_sample: u64,
    pub slack_ns_per_prime: f64,
    pub sieve_ns_per_prime: f64,
    /// Ratio to the previous row; absent on the first row.
    pub slack_growth: Option<f64>,
    pub sieve_growth: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub primes_checked: u64,
    pub discrepancies: Vec<DiscrepancyRecord>,
    pub beyond_range_uses: u64,
    pub max_observed_gap: u64,
    #[serde(rename = "max_observed_E")]
    pub max_observed_e: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub twin_leaders: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bench: Option<Vec<BenchRow>>,
    pub wall_time_secs: f64,
    pub workers: Vec<WorkerTiming>,
}

impl CampaignReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }

    /// The report with every timing field zeroed, for determinism checks.
    pub fn timing_stripped(&self) -> CampaignReport {
        let mut r = self.clone();
        r.wall_time_secs = 0.0;
        r.workers.clear();
        r.config.worker_count = 0;
        r.config.checkpoint_path = None;
        r.config.output_path = None;
        if let Some(rows) = &mut r.bench {
            for row in rows {
                row.slack_ns_per_prime = 0.0;
                row.sieve_ns_per_prime = 0.0;
                row.slack_growth = None;
                row.sieve_growth = None;
            }
        }
        r
    }

    /// Writes `report.json` and `discrepancies.jsonl` into `dir`.
    pub fn persist(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut report = serde_json::to_string_pretty(self)?;
        report.push('\n');
        fs::write(dir.join("report.json"), report)?;
        let mut f = fs::File::create(dir.join("discrepancies.jsonl"))?;
        write_discrepancies(&mut f, &self.discrepancies)?;
        Ok(())
    }
}

pub fn write_discrepancies<W: Write>(mut out: W, records: &[DiscrepancyRecord]) -> Result<()> {
    for r in records {
        writeln!(out, "{}", serde_json::to_string(r)?)?;
    }
    Ok(())
}

/// Parses a `discrepancies.jsonl` body. Rejects records whose two sides agree.
pub fn read_discrepancies(text: &str) -> Result<Vec<DiscrepancyRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            let r: DiscrepancyRecord = serde_json::from_str(l)
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
            if r.claimed == r.oracle {
                return Err(Error::Parse(format!(
                    "line {}: claimed equals oracle",
                    n + 1
                )));
            }
            Ok(r)
        })
        .collect()
}

pub fn read_report(text: &str) -> Result<CampaignReport> {
    Ok(serde_json::from_str(text)?)
}

/// Splits `[start, start + count)` into at most `workers` contiguous blocks.
pub fn partition(start: u64, count: u64, workers: usize) -> Vec<(u64, u64)> {
    let workers = (workers as u64).clamp(1, count.max(1));
    let base = count / workers;
    let extra = count % workers;
    let mut out = Vec::with_capacity(workers as usize);
    let mut at = start;
    for w in 0..workers {
        let len = base + u64::from(w < extra);
        if len > 0 {
            out.push((at, len));
        }
        at += len;
    }
    out
}

#[derive(Debug, Default)]
struct BlockOutcome {
    discrepancies: Vec<DiscrepancyRecord>,
    beyond_range_uses: u64,
    max_gap: u64,
    max_e: u64,
    twin_leaders: u64,
    last_claimed: u64,
}

/// A campaign in progress: owns the oracle stream and optional checkpoint.
pub struct Campaign {
    cfg: CampaignConfig,
    /// `primes[k]` is the prime with index `k + 1`.
    primes: Vec<u64>,
    done: Vec<ChunkRecord>,
    writer: Option<CheckpointWriter>,
}

impl Campaign {
    pub fn new(cfg: CampaignConfig, budget: MemBudget) -> Result<Self> {
        cfg.validate()?;
        if cfg.kind == CampaignKind::Bench {
            return Err(Error::Config(
                "bench campaigns run through run_bench".into(),
            ));
        }
        let mut done = Vec::new();
        let mut writer = None;
        if let Some(path) = &cfg.checkpoint_path {
            if let Some(ck) = Checkpoint::load(path)? {
                if ck.header != cfg.header() {
                    return Err(Error::Config(format!(
                        "checkpoint {} belongs to a different campaign",
                        path.display()
                    )));
                }
                let mut expect = cfg.start_index;
                for c in &ck.chunks {
                    if c.first_index != expect || c.count == 0 {
                        return Err(Error::CorruptCheckpoint {
                            line: 0,
                            reason: format!(
                                "chunk at index {} where {expect} was expected",
                                c.first_index
                            ),
                        });
                    }
                    expect += c.count;
                }
                if expect > cfg.end_index() {
                    return Err(Error::CorruptCheckpoint {
                        line: 0,
                        reason: "chunks run past the configured range".into(),
                    });
                }
                done = ck.chunks;
            }
            writer = Some(CheckpointWriter::open(path, &cfg.header())?);
        }
        // one extra prime: the oracle successor of the last index
        let needed = usize::try_from(cfg.end_index())
            .map_err(|_| Error::Config("index range exceeds addressable memory".into()))?;
        let primes = first_primes(needed, budget)?;
        Ok(Campaign {
            cfg,
            primes,
            done,
            writer,
        })
    }

    pub fn config(&self) -> &CampaignConfig {
        &self.cfg
    }

    /// First index not yet processed.
    pub fn next_index(&self) -> u64 {
        self.done
            .last()
            .map_or(self.cfg.start_index, |c| c.first_index + c.count)
    }

    pub fn is_finished(&self) -> bool {
        self.next_index() >= self.cfg.end_index()
    }

    pub fn chunks_done(&self) -> usize {
        self.done.len()
    }

    /// Processes one chunk and checkpoints it. Returns `false` once finished.
    pub fn step(&mut self) -> Result<bool> {
        if self.is_finished() {
            return Ok(false);
        }
        let first = self.next_index();
        let remaining = self.cfg.end_index() - first;
        let len = match self.cfg.checkpoint_every {
            0 => remaining,
            n => n.min(remaining),
        };
        let workers = if self.cfg.chain {
            1
        } else {
            self.cfg.worker_count
        };
        let carry = self.done.last().map(|c| c.last_claimed);
        let blocks = partition(first, len, workers);

        let this = &*self;
        let results: Vec<Result<(BlockOutcome, WorkerTiming)>> = if blocks.len() == 1 {
            vec![this.run_timed(0, blocks[0], carry)]
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = blocks
                    .iter()
                    .enumerate()
                    .map(|(w, &b)| s.spawn(move || this.run_timed(w, b, None)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("campaign worker panicked"))
                    .collect()
            })
        };

        let mut chunk = ChunkRecord {
            first_index: first,
            count: len,
            ..Default::default()
        };
        for r in results {
            let (out, timing) = r?;
            chunk.discrepancies.extend(out.discrepancies);
            chunk.beyond_range_uses += out.beyond_range_uses;
            chunk.max_gap = chunk.max_gap.max(out.max_gap);
            chunk.max_e = chunk.max_e.max(out.max_e);
            chunk.twin_leaders += out.twin_leaders;
            chunk.last_claimed = out.last_claimed;
            chunk.workers.push(timing);
        }
        if let Some(w) = &mut self.writer {
            w.append_chunk(&chunk)?;
        }
        self.done.push(chunk);
        Ok(true)
    }

    fn run_timed(
        &self,
        worker: usize,
        (first, len): (u64, u64),
        carry: Option<u64>,
    ) -> Result<(BlockOutcome, WorkerTiming)> {
        let t = Instant::now();
        let out = match self.cfg.kind {
            CampaignKind::NextPrime => self.next_prime_block(first, len, carry),
            CampaignKind::GapBound => self.gap_block(first, len),
            CampaignKind::Twin => self.twin_block(first, len),
            CampaignKind::Bench => unreachable!("rejected in Campaign::new"),
        }?;
        Ok((
            out,
            WorkerTiming {
                worker,
                first_index: first,
                count: len,
                elapsed_secs: t.elapsed().as_secs_f64(),
            },
        ))
    }

    fn prime(&self, index: u64) -> u64 {
        self.primes[(index - 1) as usize]
    }

    fn next_prime_block(&self, first: u64, len: u64, carry: Option<u64>) -> Result<BlockOutcome> {
        let mut method = SlackMethod::new();
        let mut out = BlockOutcome::default();
        let mut input = carry.unwrap_or_else(|| self.prime(first));
        for i in first..first + len {
            let p_i = self.prime(i);
            if !self.cfg.chain || input != p_i {
                // chain mode resynchronizes after a mismatch, which is
                // already recorded against the previous index
                input = p_i;
            }
            let oracle_next = self.prime(i + 1);
            let r = match self.cfg.mode {
                MethodMode::Faithful => method.next_faithful(input)?,
                MethodMode::Fast => method.next_fast(input)?,
            };
            out.beyond_range_uses += u64::from(r.used_beyond_range);
            out.max_e = out.max_e.max(r.e);
            out.max_gap = out.max_gap.max(oracle_next - p_i);
            if r.successor != oracle_next {
                out.discrepancies.push(DiscrepancyRecord {
                    index: i,
                    p_i,
                    claimed: ClaimValue::Int(r.successor),
                    oracle: ClaimValue::Int(oracle_next),
                    claim_kind: ClaimKind::NextPrime,
                });
            }
            let ceiling = successor_upper_bound(p_i);
            if r.successor as u128 > ceiling {
                out.discrepancies.push(DiscrepancyRecord {
                    index: i,
                    p_i,
                    claimed: ClaimValue::Int(r.successor),
                    oracle: ClaimValue::Int(ceiling.min(u64::MAX as u128) as u64),
                    claim_kind: ClaimKind::Eq5Bound,
                });
            }
            input = r.successor;
            out.last_claimed = r.successor;
        }
        Ok(out)
    }

    fn gap_block(&self, first: u64, len: u64) -> Result<BlockOutcome> {
        let mut out = BlockOutcome::default();
        for i in first..first + len {
            let rec = gap_record(i, self.prime(i), self.prime(i + 1))?;
            out.max_gap = out.max_gap.max(rec.gap);
            if !rec.within_paper_bound {
                out.discrepancies.push(DiscrepancyRecord {
                    index: i,
                    p_i: rec.p_i,
                    claimed: ClaimValue::Int(rec.bound_paper),
                    oracle: ClaimValue::Int(rec.gap),
                    claim_kind: ClaimKind::GapBound,
                });
            }
        }
        Ok(out)
    }

    fn twin_block(&self, first: u64, len: u64) -> Result<BlockOutcome> {
        let mut out = BlockOutcome::default();
        for i in first..first + len {
            let p = self.prime(i);
            out.max_gap = out.max_gap.max(self.prime(i + 1) - p);
            let verdict = twin_verdict(p)?;
            let truth = is_prime_trial(p + 2);
            out.twin_leaders += u64::from(verdict);
            if verdict != truth {
                out.discrepancies.push(DiscrepancyRecord {
                    index: i,
                    p_i: p,
                    claimed: ClaimValue::Bool(verdict),
                    oracle: ClaimValue::Bool(truth),
                    claim_kind: ClaimKind::TwinVerdict,
                });
            }
        }
        Ok(out)
    }

    /// Runs to completion and, when configured, persists the outputs.
    pub fn run(mut self) -> Result<CampaignReport> {
        while self.step()? {}
        let report = self.report();
        if let Some(dir) = &report.config.output_path {
            report.persist(dir)?;
        }
        Ok(report)
    }

    /// Aggregates the chunks processed so far.
    pub fn report(&self) -> CampaignReport {
        let mut report = CampaignReport {
            config: self.cfg.clone(),
            primes_checked: 0,
            discrepancies: Vec::new(),
            beyond_range_uses: 0,
            max_observed_gap: 0,
            max_observed_e: 0,
            twin_leaders: (self.cfg.kind == CampaignKind::Twin).then_some(0),
            bench: None,
            wall_time_secs: 0.0,
            workers: Vec::new(),
        };
        for c in &self.done {
            report.primes_checked += c.count;
            report.discrepancies.extend(c.discrepancies.iter().cloned());
            report.beyond_range_uses += c.beyond_range_uses;
            report.max_observed_gap = report.max_observed_gap.max(c.max_gap);
            report.max_observed_e = report.max_observed_e.max(c.max_e);
            if let Some(t) = &mut report.twin_leaders {
                *t += c.twin_leaders;
            }
            // chunk wall time is its slowest worker
            report.wall_time_secs += c.workers.iter().map(|w| w.elapsed_secs).fold(0.0, f64::max);
            for w in &c.workers {
                match report.workers.iter_mut().find(|x| x.worker == w.worker) {
                    Some(acc) => {
                        acc.count += w.count;
                        acc.elapsed_secs += w.elapsed_secs;
                    }
                    None => report.workers.push(w.clone()),
                }
            }
        }
        report
    }
}

pub fn run_campaign(cfg: CampaignConfig) -> Result<CampaignReport> {
    run_campaign_with(cfg, MemBudget::default())
}

pub fn run_campaign_with(cfg: CampaignConfig, budget: MemBudget) -> Result<CampaignReport> {
    match cfg.kind {
        CampaignKind::Bench => run_bench_with(cfg, budget),
        _ => Campaign::new(cfg, budget)?.run(),
    }
}

fn expect_kind(cfg: &CampaignConfig, kind: CampaignKind) -> Result<()> {
    if cfg.kind != kind {
        return Err(Error::Config(format!(
            "expected a {kind} campaign, got {}",
            cfg.kind
        )));
    }
    Ok(())
}

pub fn run_next_prime_campaign(cfg: CampaignConfig) -> Result<CampaignReport> {
    expect_kind(&cfg, CampaignKind::NextPrime)?;
    run_campaign(cfg)
}

pub fn run_gap_bound_campaign(cfg: CampaignConfig) -> Result<CampaignReport> {
    expect_kind(&cfg, CampaignKind::GapBound)?;
    run_campaign(cfg)
}

pub fn run_twin_campaign(cfg: CampaignConfig) -> Result<CampaignReport> {
    expect_kind(&cfg, CampaignKind::Twin)?;
    run_campaign(cfg)
}

pub fn run_bench(cfg: CampaignConfig) -> Result<CampaignReport> {
    run_bench_with(cfg, MemBudget::default())
}

const BENCH_ROUNDS: usize = 5;

/// Times the slack method on `count` consecutive primes from each scale,
/// against the amortized per-prime cost of sieving up to that scale.
/// Each timing is the fastest of several rounds.
pub fn run_bench_with(cfg: CampaignConfig, budget: MemBudget) -> Result<CampaignReport> {
    expect_kind(&cfg, CampaignKind::Bench)?;
    cfg.validate()?;
    let started = Instant::now();
    let mut rows: Vec<BenchRow> = Vec::new();
    let mut discrepancies = Vec::new();
    let mut checked = 0;
    let (mut max_gap, mut max_e, mut beyond) = (0, 0, 0);
    let mut method = SlackMethod::with_budget(budget);

    for &scale in &cfg.bench_scales {
        // samples: the `count` primes at or above `scale`, plus one oracle successor
        let span = scale + 64 * cfg.count.max(1) * (64 - scale.leading_zeros() as u64) + 1024;
        let table = sieve_upto_with(scale.saturating_add(span), budget)?;
        let samples: Vec<u64> = table
            .iter()
            .skip_while(|&p| p < scale)
            .take(cfg.count as usize + 1)
            .collect();
        if samples.len() < cfg.count as usize + 1 {
            return Err(Error::Capacity {
                what: "bench sample window".into(),
                needed: span,
                budget: budget.bytes,
            });
        }
        let pi_below = table.count_upto(scale).unwrap_or(0);

        // correctness pass doubles as warm-up
        for (k, w) in samples.windows(2).enumerate() {
            let r = method.next_faithful(w[0])?;
            checked += 1;
            beyond += u64::from(r.used_beyond_range);
            max_e = max_e.max(r.e);
            max_gap = max_gap.max(w[1] - w[0]);
            if r.successor != w[1] {
                discrepancies.push(DiscrepancyRecord {
                    index: pi_below + k as u64 + 1,
                    p_i: w[0],
                    claimed: ClaimValue::Int(r.successor),
                    oracle: ClaimValue::Int(w[1]),
                    claim_kind: ClaimKind::NextPrime,
                });
            }
        }

        let mut best_slack = f64::INFINITY;
        for _ in 0..BENCH_ROUNDS {
            let t = Instant::now();
            for &p in &samples[..cfg.count as usize] {
                std::hint::black_box(method.next_faithful(std::hint::black_box(p))?);
            }
            best_slack = best_slack.min(t.elapsed().as_nanos() as f64 / cfg.count as f64);
        }
        let mut best_sieve = f64::INFINITY;
        for _ in 0..BENCH_ROUNDS {
            let t = Instant::now();
            let tbl = std::hint::black_box(sieve_upto_with(scale, budget)?);
            let per = t.elapsed().as_nanos() as f64 / tbl.count().max(1) as f64;
            best_sieve = best_sieve.min(per);
        }
        let prev = rows.last();
        rows.push(BenchRow {
            scale,
            samples: cfg.count,
            first_sample: samples[0],
            slack_ns_per_prime: best_slack,
            sieve_ns_per_prime: best_sieve,
            slack_growth: prev.map(|p| best_slack / p.slack_ns_per_prime),
            sieve_growth: prev.map(|p| best_sieve / p.sieve_ns_per_prime),
        });
    }

    let report = CampaignReport {
        config: cfg.clone(),
        primes_checked: checked,
        discrepancies,
        beyond_range_uses: beyond,
        max_observed_gap: max_gap,
        max_observed_e: max_e,
        twin_leaders: None,
        bench: Some(rows),
        wall_time_secs: started.elapsed().as_secs_f64(),
        workers: vec![WorkerTiming {
            worker: 0,
            first_index: 0,
            count: checked,
            elapsed_secs: started.elapsed().as_secs_f64(),
        }],
    };
    if let Some(dir) = &cfg.output_path {
        report.persist(dir)?;
    }
    Ok(report)
}
