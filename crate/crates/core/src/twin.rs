//! Twin-prime R-constraints.
//!
//! A prime `p >= 5` leads a twin pair exactly when no candidate divisor
//! `d` in `[2, (p-1)/2]` leaves remainder `d - 2`, i.e. no slack equals 2.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::next_prime::divisor_range;
use crate::oracle::{is_prime_trial, sieve_upto_with, MemBudget};
use crate::slack::QuotientSweep;

pub const TWIN_CSV_HEADER: &str = "p,p_plus_2";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinReport {
    pub p: u64,
    #[serde(skip)]
    pub checked_divisors: u64,
    pub violations: Vec<u64>,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub companion: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintStatus {
    EqualsOne,
    GreaterThanTwo,
    Violates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub divisor: u64,
    pub slack: u64,
    pub status: ConstraintStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintTrace {
    pub p: u64,
    pub rows: Vec<TraceRow>,
}

fn checked_range(p: u64) -> Result<(u64, u64)> {
    let (lo, hi) = divisor_range(p)?;
    Ok((lo, hi))
}

/// Every divisor `d` in `[2, (p-1)/2]` with `p mod d = d - 2`, ascending.
pub fn r_constraint_violations(p: u64) -> Result<Vec<u64>> {
    let (lo, hi) = checked_range(p)?;
    Ok(QuotientSweep::new(p, lo, hi)
        .filter(|&(d, _, r)| r + 2 == d)
        .map(|(d, _, _)| d)
        .collect())
}

/// [`r_constraint_violations`] after confirming `p` by trial division.
pub fn r_constraint_violations_verified(p: u64) -> Result<Vec<u64>> {
    if !is_prime_trial(p) {
        return Err(Error::NotPrime {
            n: p,
            witness: None,
        });
    }
    r_constraint_violations(p)
}

/// Full report with every violation listed.
pub fn is_twin_leader(p: u64) -> Result<TwinReport> {
    let (lo, hi) = checked_range(p)?;
    let violations = r_constraint_violations(p)?;
    let verdict = violations.is_empty();
    Ok(TwinReport {
        p,
        checked_divisors: hi - lo + 1,
        violations,
        verdict,
        companion: verdict.then_some(p + 2),
    })
}

/// Verdict only; stops at the first violated constraint.
pub fn twin_verdict(p: u64) -> Result<bool> {
    let (lo, hi) = checked_range(p)?;
    Ok(!QuotientSweep::new(p, lo, hi).any(|(d, _, r)| r + 2 == d))
}

/// Per-divisor slacks classified against the slack constraints.
pub fn constraint_trace(p: u64) -> Result<ConstraintTrace> {
    let (lo, hi) = checked_range(p)?;
    let mut rows = Vec::with_capacity((hi - lo + 1) as usize);
    for (d, _, r) in QuotientSweep::new(p, lo, hi) {
        if r == 0 {
            return Err(Error::NotPrime {
                n: p,
                witness: Some(d),
            });
        }
        let slack = d - r;
        let status = match slack {
            1 => ConstraintStatus::EqualsOne,
            2 => ConstraintStatus::Violates,
            _ => ConstraintStatus::GreaterThanTwo,
        };
        rows.push(TraceRow {
            divisor: d,
            slack,
            status,
        });
    }
    Ok(ConstraintTrace { p, rows })
}

/// Twin pairs `(p, p + 2)` with `p + 2 <= u`, judged by the R-constraints.
///
/// Leaders start at 5; `(3, 5)` is only listed when `include_three` is set.
pub fn twin_pairs_upto(u: u64, include_three: bool, budget: MemBudget) -> Result<Vec<(u64, u64)>> {
    if u < 5 {
        return Err(Error::domain(format!(
            "twin search bound must be >= 5, got {u}"
        )));
    }
    let table = sieve_upto_with(u, budget)?;
    let mut out = Vec::new();
    if include_three {
        out.push((3, 5));
    }
    for p in table
        .iter()
        .skip_while(|&p| p < 5)
        .take_while(|&p| p + 2 <= u)
    {
        if twin_verdict(p)? {
            out.push((p, p + 2));
        }
    }
    Ok(out)
}

pub fn write_twin_csv<W: Write>(mut out: W, pairs: &[(u64, u64)]) -> Result<()> {
    writeln!(out, "{TWIN_CSV_HEADER}")?;
    for (p, q) in pairs {
        writeln!(out, "{p},{q}")?;
    }
    Ok(())
}
