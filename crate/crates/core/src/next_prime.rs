//! Successor of a prime from its slack list.
//!
//! For a prime `p >= 5` every divisor `d` in `[2, (p-1)/2]` contributes the
//! slack `d * (floor(p/d) + 1) - p`. The successor is `p + e`, where `e` is
//! the first even number absent from those slacks. Evens are searched from 2
//! up to the in-range ceiling; if every one of them is present the method
//! takes the fixed beyond-range value instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{is_prime_trial, MemBudget};
use crate::slack::{slack_from_quotient, QuotientSweep};

/// Primes below 5 are not produced by the method; their successors are seeded.
pub const SEED_SUCCESSORS: [(u64, u64); 2] = [(2, 3), (3, 5)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackEntry {
    pub divisor: u64,
    pub slack: u64,
}

/// The working state of the method for one prime.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlackList {
    p: u64,
    entries: Vec<SlackEntry>,
    /// `even_present[k]` records whether slack `2k` occurs.
    even_present: Vec<bool>,
}

impl SlackList {
    /// Builds the slack list of `p`. Odd composites are rejected once the
    /// scan has met a divisor of `p`.
    pub fn build(p: u64) -> Result<Self> {
        let mut list = SlackList::default();
        list.rebuild(p, MemBudget::default())?;
        Ok(list)
    }

    /// Rebuilds in place, reusing the allocations of a previous list.
    pub fn rebuild(&mut self, p: u64, budget: MemBudget) -> Result<()> {
        let (lo, hi) = divisor_range(p)?;
        let per_divisor = std::mem::size_of::<SlackEntry>() as u64 + 1;
        check_budget("slack list", hi, per_divisor, budget)?;
        self.p = p;
        self.entries.clear();
        self.entries.reserve((hi - lo + 1) as usize);
        self.even_present.clear();
        self.even_present.resize((hi / 2 + 1) as usize, false);
        let mut witness = None;
        for (d, q, r) in QuotientSweep::new(p, lo, hi) {
            if r == 0 {
                // divisible: nothing is stored
                witness.get_or_insert(d);
                continue;
            }
            let s = slack_from_quotient(p, d, q)?;
            self.entries.push(SlackEntry {
                divisor: d,
                slack: s,
            });
            if s % 2 == 0 {
                self.even_present[(s / 2) as usize] = true;
            }
        }
        match witness {
            Some(d) => Err(Error::NotPrime {
                n: p,
                witness: Some(d),
            }),
            None => Ok(()),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[SlackEntry] {
        &self.entries
    }

    pub fn contains_even(&self, e: u64) -> bool {
        e % 2 == 0
            && self
                .even_present
                .get((e / 2) as usize)
                .copied()
                .unwrap_or(false)
    }

    /// The distinct even slacks, ascending.
    pub fn even_slacks(&self) -> impl Iterator<Item = u64> + '_ {
        self.even_present
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(k, _)| 2 * k as u64)
    }

    pub fn search_range(&self) -> EvenSearchRange {
        EvenSearchRange::for_prime(self.p)
    }
}

/// Bounds of the even search for one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenSearchRange {
    pub lo: u64,
    /// Largest even scanned before falling back. May be below `lo`.
    pub hi_in_range: u64,
    /// Fallback even when nothing in `[lo, hi_in_range]` is missing.
    pub beyond: u64,
}

impl EvenSearchRange {
    pub fn for_prime(p: u64) -> Self {
        let half = (p - 1) / 2;
        if half % 2 == 1 {
            EvenSearchRange {
                lo: 2,
                hi_in_range: half - 1,
                beyond: half + 1,
            }
        } else {
            EvenSearchRange {
                lo: 2,
                hi_in_range: half.saturating_sub(2),
                beyond: half,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NextPrimeResult {
    pub p: u64,
    pub e: u64,
    pub successor: u64,
    pub used_beyond_range: bool,
}

fn check_budget(what: &str, divisors: u64, bytes_each: u64, budget: MemBudget) -> Result<()> {
    let needed = divisors.saturating_mul(bytes_each);
    if needed > budget.bytes {
        return Err(Error::Capacity {
            what: what.to_string(),
            needed,
            budget: budget.bytes,
        });
    }
    Ok(())
}

/// Inclusive divisor range `(2, (p-1)/2)` for an odd `p >= 5`.
pub fn divisor_range(p: u64) -> Result<(u64, u64)> {
    if p < 5 {
        return Err(Error::domain(format!(
            "the slack method starts at 5 (2 and 3 are seeded), got {p}"
        )));
    }
    if p % 2 == 0 {
        return Err(Error::NotPrime {
            n: p,
            witness: Some(2),
        });
    }
    Ok((2, (p - 1) / 2))
}

pub fn build_slack_list(p: u64) -> Result<SlackList> {
    SlackList::build(p)
}

/// Like [`build_slack_list`], but first confirms `p` with trial division.
pub fn build_slack_list_verified(p: u64) -> Result<SlackList> {
    if !is_prime_trial(p) {
        return Err(Error::NotPrime {
            n: p,
            witness: None,
        });
    }
    SlackList::build(p)
}

/// First even slack missing from `list`, or the beyond-range fallback.
pub fn first_missing_even(list: &SlackList) -> (u64, bool) {
    let range = list.search_range();
    let mut e = range.lo;
    while e <= range.hi_in_range {
        if !list.contains_even(e) {
            return (e, false);
        }
        e += 2;
    }
    (range.beyond, true)
}

fn result_from(p: u64, e: u64, used_beyond_range: bool) -> Result<NextPrimeResult> {
    let successor = p
        .checked_add(e)
        .ok_or_else(|| Error::overflow(format!("{p} + {e} exceeds u64")))?;
    Ok(NextPrimeResult {
        p,
        e,
        successor,
        used_beyond_range,
    })
}

/// Successor of the prime `p >= 5` by the slack method.
pub fn next_prime_slack(p: u64) -> Result<NextPrimeResult> {
    let list = SlackList::build(p)?;
    let (e, beyond) = first_missing_even(&list);
    result_from(p, e, beyond)
}

/// Successor for any prime, using the seeds for 2 and 3.
pub fn successor(p: u64) -> Result<u64> {
    if let Some(&(_, next)) = SEED_SUCCESSORS.iter().find(|(seed, _)| *seed == p) {
        return Ok(next);
    }
    next_prime_slack(p).map(|r| r.successor)
}

/// Reusable state for computing many successors without reallocating.
#[derive(Debug, Default)]
pub struct SlackMethod {
    list: SlackList,
    present: Vec<bool>,
    budget: MemBudget,
}

impl SlackMethod {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(budget: MemBudget) -> Self {
        SlackMethod {
            budget,
            ..Self::default()
        }
    }

    /// Same as [`next_prime_slack`], keeping the list buffers across calls.
    pub fn next_faithful(&mut self, p: u64) -> Result<NextPrimeResult> {
        self.list.rebuild(p, self.budget)?;
        let (e, beyond) = first_missing_even(&self.list);
        result_from(p, e, beyond)
    }

    /// Skips storing the list: only the even-slack presence set is built,
    /// from `s = d - (p mod d)`. Output is identical to the faithful path.
    pub fn next_fast(&mut self, p: u64) -> Result<NextPrimeResult> {
        let (lo, hi) = divisor_range(p)?;
        check_budget("even-slack set", hi, 1, self.budget)?;
        let range = EvenSearchRange::for_prime(p);
        self.present.clear();
        self.present.resize((hi / 2 + 1) as usize, false);
        let mut witness = None;
        for (d, _, r) in QuotientSweep::new(p, lo, hi) {
            if r == 0 {
                witness.get_or_insert(d);
                continue;
            }
            let s = d - r;
            if s % 2 == 0 {
                self.present[(s / 2) as usize] = true;
            }
        }
        if let Some(d) = witness {
            return Err(Error::NotPrime {
                n: p,
                witness: Some(d),
            });
        }
        let mut e = range.lo;
        while e <= range.hi_in_range {
            if !self.present[(e / 2) as usize] {
                return result_from(p, e, false);
            }
            e += 2;
        }
        result_from(p, range.beyond, true)
    }

    pub fn list(&self) -> &SlackList {
        &self.list
    }
}

/// Iterates the method `count` times starting from `start`.
pub fn prime_sequence(start: u64, count: usize) -> Result<Vec<NextPrimeResult>> {
    if count == 0 {
        return Err(Error::domain("sequence length must be at least 1"));
    }
    let mut method = SlackMethod::new();
    let mut out = Vec::with_capacity(count);
    let mut p = start;
    for _ in 0..count {
        let r = method.next_faithful(p)?;
        p = r.successor;
        out.push(r);
    }
    Ok(out)
}

/// Largest successor the method can emit: `p + (p-1)/2 + 1`. Widened so
/// that it is defined across the whole `u64` domain.
pub fn successor_upper_bound(p: u64) -> u128 {
    p as u128 + (p.saturating_sub(1) / 2) as u128 + 1
}

/// `floor((3p - 1) / 4)`, the largest candidate divisor of any successor.
pub fn max_divisor_bound(p: u64) -> u64 {
    ((3 * p as u128).saturating_sub(1) / 4) as u64
}
