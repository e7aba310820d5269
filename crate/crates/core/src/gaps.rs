//! Prime gaps: records, the `floor((p+1)/2)` bound, merit, maximal gaps
//! and the classical size estimates they are compared against.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::emit::fmt_sig;
use crate::error::{Error, Result};

/// `log C2` for `C2 = 1.3203236`, twice the twin primes constant.
pub const WOLF_C: f64 = 0.2778769;
pub const TWICE_TWIN_PRIME_CONSTANT: f64 = 1.3203236;

pub const GAP_CSV_HEADER: &str =
    "i,p_i,p_next,gap,merit,bound_paper,within_paper_bound,is_maximal,cramer,wolf,gauss_pi";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    /// 1-based position of `p_i` among the primes, so `index = pi(p_i)`.
    pub index: u64,
    pub p_i: u64,
    pub p_next: u64,
    pub gap: u64,
    pub merit: f64,
    pub bound_paper: u64,
    pub bound_bertrand: u64,
    pub within_paper_bound: bool,
    pub is_maximal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateSet {
    pub cramer: f64,
    pub shanks: f64,
    pub wolf: f64,
    pub gauss_pi: f64,
}

pub fn paper_gap_bound(p: u64) -> u64 {
    p / 2 + p % 2
}

pub fn merit(gap: u64, p: u64) -> Result<f64> {
    if p < 2 {
        return Err(Error::domain(format!("merit needs p >= 2, got {p}")));
    }
    Ok(gap as f64 / (p as f64).ln())
}

pub fn gap_record(index: u64, p_i: u64, p_next: u64) -> Result<GapRecord> {
    if p_next <= p_i {
        return Err(Error::domain(format!(
            "successor {p_next} is not above {p_i}"
        )));
    }
    let gap = p_next - p_i;
    let bound_paper = paper_gap_bound(p_i);
    Ok(GapRecord {
        index,
        p_i,
        p_next,
        gap,
        merit: merit(gap, p_i)?,
        bound_paper,
        bound_bertrand: p_i,
        within_paper_bound: gap <= bound_paper,
        is_maximal: false,
    })
}

/// Flags records whose gap strictly exceeds every earlier one in the stream.
#[derive(Debug, Clone, Default)]
pub struct MaximalGapTracker {
    best: Option<u64>,
    last_index: Option<u64>,
}

impl MaximalGapTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observe(&mut self, record: &mut GapRecord) -> Result<()> {
        if let Some(prev) = self.last_index {
            if record.index <= prev {
                return Err(Error::Unordered {
                    index: record.index,
                    previous: prev,
                });
            }
        }
        self.last_index = Some(record.index);
        record.is_maximal = self.best.map_or(true, |b| record.gap > b);
        if record.is_maximal {
            self.best = Some(record.gap);
        }
        Ok(())
    }
}

pub fn maximal_gaps(mut records: Vec<GapRecord>) -> Result<Vec<GapRecord>> {
    let mut tracker = MaximalGapTracker::new();
    for r in &mut records {
        tracker.observe(r)?;
    }
    Ok(records)
}

/// Gap records for consecutive entries of `primes`, the first of which has
/// index `first_index`. Maximal flags are relative to this slice.
pub fn gap_records(primes: &[u64], first_index: u64) -> Result<Vec<GapRecord>> {
    let records = primes
        .windows(2)
        .zip(first_index..)
        .map(|(w, i)| gap_record(i, w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    maximal_gaps(records)
}

/// Classical estimates at `p`, given the exact count `pi_p = pi(p)`.
pub fn estimates(p: u64, pi_p: u64) -> Result<EstimateSet> {
    if pi_p == 0 {
        return Err(Error::domain("pi(p) must be positive"));
    }
    if p < 2 {
        return Err(Error::domain(format!("estimates need p >= 2, got {p}")));
    }
    let ln_p = (p as f64).ln();
    let sq = ln_p * ln_p;
    let pi = pi_p as f64;
    Ok(EstimateSet {
        cramer: sq,
        shanks: sq,
        wolf: p as f64 / pi * (2.0 * pi.ln() - ln_p + WOLF_C),
        gauss_pi: p as f64 / ln_p,
    })
}

/// Writes gap records as CSV. Estimates are evaluated at `p_i` with
/// `pi(p_i) = index`.
pub fn write_gap_csv<W: Write>(mut out: W, records: &[GapRecord]) -> Result<()> {
    writeln!(out, "{GAP_CSV_HEADER}")?;
    for r in records {
        let est = estimates(r.p_i, r.index)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.index,
            r.p_i,
            r.p_next,
            r.gap,
            fmt_sig(r.merit),
            r.bound_paper,
            r.within_paper_bound,
            r.is_maximal,
            fmt_sig(est.cramer),
            fmt_sig(est.wolf),
            fmt_sig(est.gauss_pi),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        ((a - b) / b).abs() < 1e-9
    }

    #[test]
    fn bound_values() {
        assert_eq!(paper_gap_bound(2), 1);
        assert_eq!(paper_gap_bound(7), 4);
        assert_eq!(paper_gap_bound(11), 6);
        assert_eq!(paper_gap_bound(u64::MAX), 1 << 63);
        for p in 2..10_000 {
            assert!(paper_gap_bound(p) < p);
        }
    }

    #[test]
    fn record_examples() {
        let r = gap_record(1, 2, 3).unwrap();
        assert_eq!((r.gap, r.bound_paper, r.within_paper_bound), (1, 1, true));
        let r = gap_record(5, 11, 13).unwrap();
        assert_eq!((r.gap, r.bound_paper), (2, 6));
        // definitional gap at index 4 is 4
        let r = gap_record(4, 7, 11).unwrap();
        assert_eq!(r.gap, 4);
        assert!(close(r.merit, 2.055593369479003));
        assert!(gap_record(3, 7, 7).is_err());
    }

    #[test]
    fn merit_values() {
        assert!(close(merit(2, 11).unwrap(), 0.8340647828484926));
        assert_eq!(merit(0, 11).unwrap(), 0.0);
        assert!(close(merit(4, 7).unwrap(), 2.055593369479003));
        assert!(merit(1, 1).is_err());
    }

    #[test]
    fn estimate_values() {
        let e = estimates(101, 26).unwrap();
        assert!(close(e.cramer, 21.299337384969135));
        assert_eq!(e.cramer, e.shanks);
        assert!(close(e.wolf, 8.464380591514313));
        let e = estimates(3, 2).unwrap();
        assert!(close(e.gauss_pi, 2.730717679880512));
        assert!(estimates(101, 0).is_err());
        assert!((TWICE_TWIN_PRIME_CONSTANT.ln() - WOLF_C).abs() < 1e-6);
    }

    #[test]
    fn maximal_flags() {
        let recs = gap_records(&[2, 3, 5, 7, 11, 13], 1).unwrap();
        let gaps: Vec<_> = recs.iter().map(|r| r.gap).collect();
        assert_eq!(gaps, vec![1, 2, 2, 4, 2]);
        let max: Vec<_> = recs
            .iter()
            .filter(|r| r.is_maximal)
            .map(|r| r.index)
            .collect();
        assert_eq!(max, vec![1, 2, 4]);

        let single = maximal_gaps(vec![gap_record(9, 23, 29).unwrap()]).unwrap();
        assert!(single[0].is_maximal);

        let constant: Vec<_> = (1..5)
            .map(|i| gap_record(i, 100 * i, 100 * i + 6).unwrap())
            .collect();
        let flags: Vec<_> = maximal_gaps(constant)
            .unwrap()
            .iter()
            .map(|r| r.is_maximal)
            .collect();
        assert_eq!(flags, vec![true, false, false, false]);
    }

    #[test]
    fn unordered_rejected() {
        let recs = vec![gap_record(3, 5, 7).unwrap(), gap_record(2, 3, 5).unwrap()];
        assert!(matches!(
            maximal_gaps(recs),
            Err(Error::Unordered {
                index: 2,
                previous: 3
            })
        ));
    }

    #[test]
    fn csv_layout() {
        let recs = gap_records(&[2, 3, 5, 7], 1).unwrap();
        let mut buf = Vec::new();
        write_gap_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], GAP_CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1,2,3,1,1.442695041,1,true,true,"));
        assert!(!text.contains('E') && !text.contains("e-") && !text.contains("e+"));
    }
}
