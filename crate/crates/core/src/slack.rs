//! Slack and remainder arithmetic.
//!
//! For a dividend `p` and divisor `d`, the slack is the smallest positive
//! `s` with `d | p + s`, computed as `d * (floor(p / d) + 1) - p`. When
//! `d | p` the expression evaluates to `d` itself, never zero. The remainder
//! is its dual: `p mod d = d - s` whenever `d` does not divide `p`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A candidate divisor, always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Divisor(u64);

impl Divisor {
    pub fn new(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("divisor must be >= 2, got {d}")));
        }
        Ok(Divisor(d))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Whether this divisor lies in the candidate range `[2, (p-1)/2]` for `p`.
    pub fn is_candidate_for(self, p: u64) -> bool {
        self.0 <= p.saturating_sub(1) / 2
    }
}

impl TryFrom<u64> for Divisor {
    type Error = Error;

    fn try_from(d: u64) -> Result<Self> {
        Divisor::new(d)
    }
}

impl From<Divisor> for u64 {
    fn from(d: Divisor) -> u64 {
        d.0
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Amount by which a dividend falls short of the next multiple of a divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Slack(u64);

impl Slack {
    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Slack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Remainder(u64);

impl Remainder {
    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Remainder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Slack of `p` against `d`: `d * (floor(p/d) + 1) - p`, overflow-checked.
pub fn slack(p: u64, d: Divisor) -> Result<Slack> {
    if p < 2 {
        return Err(Error::domain(format!("dividend must be >= 2, got {p}")));
    }
    let d = d.get();
    slack_from_quotient(p, d, p / d).map(Slack)
}

/// The slack expression evaluated for a known quotient `q = floor(p/d)`.
#[inline]
pub(crate) fn slack_from_quotient(p: u64, d: u64, q: u64) -> Result<u64> {
    q.checked_add(1)
        .and_then(|q1| d.checked_mul(q1))
        .map(|next_multiple| next_multiple - p)
        .ok_or_else(|| Error::overflow(format!("next multiple of {d} above {p} exceeds u64")))
}

pub fn remainder(p: u64, d: Divisor) -> Remainder {
    Remainder(p % d.get())
}

/// Maps a slack back to the remainder it came from: `d - s`.
pub fn slack_remainder_dual(d: Divisor, s: Slack) -> Result<Remainder> {
    let (d, s) = (d.get(), s.get());
    if s == 0 || s > d {
        return Err(Error::domain(format!("slack {s} outside [1, {d}]")));
    }
    Ok(Remainder(d - s))
}

/// Constructs a slack value without deriving it; used to feed the dual map.
pub fn slack_value(s: u64) -> Slack {
    Slack(s)
}

/// The exact fractional part `p/d - floor(p/d)`, kept as `numer / denom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alpha {
    pub numer: u64,
    pub denom: u64,
}

impl Alpha {
    /// Checks `numer/denom == p/d - floor(p/d)` by cross multiplication.
    pub fn equals_fractional_part(&self, p: u64, d: u64) -> bool {
        if d == 0 || self.denom == 0 {
            return false;
        }
        // numer/denom == (p - d*floor(p/d)) / d
        let frac_numer = p as u128 - (d as u128) * ((p / d) as u128);
        (self.numer as u128) * (d as u128) == frac_numer * (self.denom as u128)
    }

    /// `0 <= alpha < 1`.
    pub fn in_unit_interval(&self) -> bool {
        self.denom > 0 && self.numer < self.denom
    }

    /// `1/d <= alpha <= (d-1)/d`, the range for a prime against a candidate divisor.
    pub fn in_prime_range(&self) -> bool {
        self.denom >= 2 && self.numer >= 1 && self.numer < self.denom
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

pub fn alpha(p: u64, d: Divisor) -> Alpha {
    Alpha {
        numer: p % d.get(),
        denom: d.get(),
    }
}

/// Walks `d` upward through a range, yielding `(d, floor(p/d), p mod d)`.
///
/// Above `sqrt(p)` the quotient drops by at most one per step, so the next
/// quotient and remainder follow from the previous pair without a division.
#[derive(Debug, Clone)]
pub struct QuotientSweep {
    p: u64,
    d: u64,
    end: u64,
    q: u64,
    r: u64,
    incremental_from: u64,
}

impl QuotientSweep {
    /// Sweeps `d` over `[start, end]` inclusive. `start` must be at least 1.
    pub fn new(p: u64, start: u64, end: u64) -> Self {
        let start = start.max(1);
        let root = isqrt(p);
        QuotientSweep {
            p,
            d: start,
            end,
            q: p / start,
            r: p % start,
            incremental_from: root + 1,
        }
    }
}

impl Iterator for QuotientSweep {
    type Item = (u64, u64, u64);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        if self.d > self.end {
            return None;
        }
        let out = (self.d, self.q, self.r);
        // d == u64::MAX cannot be followed
        let Some(next) = self.d.checked_add(1) else {
            self.end = 0;
            self.d = 1;
            return Some(out);
        };
        if self.d >= self.incremental_from {
            // q < d here, so r - q + next stays within [0, next)
            if self.r >= self.q {
                self.r -= self.q;
            } else {
                self.r = self.r + next - self.q;
                self.q -= 1;
            }
        } else {
            self.q = self.p / next;
            self.r = self.p % next;
        }
        self.d = next;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = if self.d > self.end {
            0
        } else {
            (self.end - self.d + 1) as usize
        };
        (n, Some(n))
    }
}

/// Integer square root, exact for all of `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}
