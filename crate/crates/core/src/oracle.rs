//! Deterministic ground truth: trial division, a whole-range sieve, and a
//! segmented sieve. The three are implemented independently of each other
//! so that none of them can silently vouch for a bug in another.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::slack::isqrt;

/// Environment variable holding the sieve memory cap in bytes.
pub const MEM_BUDGET_ENV: &str = "SLACKPRIME_MEM_BUDGET";

const DEFAULT_BUDGET_BYTES: u64 = 1 << 30;

/// Default number of odd candidates per segment.
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 20;

/// Upper bound on sieve allocations, in bytes.
///
/// Range-based operations are charged as if they held a whole odd-only
/// bitmap of their limit (`limit / 16` bytes), so `max_limit` is the
/// largest integer any oracle operation will reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemBudget {
    pub bytes: u64,
}

impl Default for MemBudget {
    fn default() -> Self {
        MemBudget {
            bytes: DEFAULT_BUDGET_BYTES,
        }
    }
}

impl MemBudget {
    pub fn new(bytes: u64) -> Self {
        MemBudget { bytes }
    }

    /// Reads `SLACKPRIME_MEM_BUDGET`, falling back to 1 GiB.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MEM_BUDGET_ENV) {
            Ok(v) => v.trim().parse::<u64>().map(MemBudget::new).map_err(|_| {
                Error::Config(format!("{MEM_BUDGET_ENV} must be a byte count, got {v:?}"))
            }),
            Err(_) => Ok(MemBudget::default()),
        }
    }

    pub fn max_limit(&self) -> u64 {
        self.bytes.saturating_mul(16)
    }

    fn check_limit(&self, what: &str, limit: u64) -> Result<()> {
        let needed = limit / 16 + 1;
        if needed > self.bytes {
            return Err(Error::Capacity {
                what: what.to_string(),
                needed,
                budget: self.bytes,
            });
        }
        Ok(())
    }
}

/// Primes below 2^16, built by plain trial division over the 6k±1 wheel.
fn small_primes() -> &'static [u32] {
    static SMALL: OnceLock<Vec<u32>> = OnceLock::new();
    SMALL.get_or_init(|| {
        let mut primes = vec![2u32, 3];
        let mut n = 5u32;
        let mut step = 2;
        while n < 1 << 16 {
            let is_p = primes
                .iter()
                .skip(1)
                .take_while(|&&q| q * q <= n)
                .all(|&q| n % q != 0);
            if is_p {
                primes.push(n);
            }
            n += step;
            step = 6 - step;
        }
        primes
    })
}

/// Trial division up to `sqrt(n)`. Exact for every `u64`.
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    if n <= u32::MAX as u64 {
        let n32 = n as u32;
        for &q in &small_primes()[2..] {
            if (q as u64) * (q as u64) > n {
                return true;
            }
            if n32 % q == 0 {
                return false;
            }
        }
        return true;
    }
    for &q in &small_primes()[2..] {
        if n % q as u64 == 0 {
            return false;
        }
    }
    // beyond the table: 6k±1 candidates from 65537
    let root = isqrt(n);
    let mut q = 65537u64;
    let mut step = if q % 6 == 1 { 4 } else { 2 };
    while q <= root {
        if n % q == 0 {
            return false;
        }
        q += step;
        step = 6 - step;
    }
    true
}

/// Odd-only primality bitmap for `[0, limit]`: bit `i` stands for `2i + 1`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
    count: u64,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Exact primality for `n <= limit`; `None` outside the table.
    pub fn is_prime(&self, n: u64) -> Option<bool> {
        if n > self.limit {
            return None;
        }
        if n == 2 {
            return Some(true);
        }
        if n % 2 == 0 {
            return Some(false);
        }
        Some(self.odd_bit(n / 2))
    }

    #[inline]
    fn odd_bit(&self, i: u64) -> bool {
        self.bits[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// pi(limit).
    pub fn count(&self) -> u64 {
        self.count
    }

    /// pi(n) for `n <= limit`.
    pub fn count_upto(&self, n: u64) -> Option<u64> {
        if n > self.limit {
            return None;
        }
        Some(self.iter().take_while(|&p| p <= n).count() as u64)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let two = (self.limit >= 2).then_some(2);
        let max_odd = if self.limit % 2 == 1 {
            self.limit
        } else {
            self.limit.saturating_sub(1)
        };
        two.into_iter().chain(
            (1..=max_odd / 2)
                .filter(move |&i| self.odd_bit(i))
                .map(|i| 2 * i + 1),
        )
    }

    pub fn primes(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Smallest prime strictly above `n`, if the table reaches it.
    pub fn next_prime_after(&self, n: u64) -> Option<u64> {
        let mut c = n.checked_add(1)?;
        while c <= self.limit {
            if self.is_prime(c) == Some(true) {
                return Some(c);
            }
            c += 1;
        }
        None
    }
}

/// Sieve of Eratosthenes over `[0, n]` with the default budget.
pub fn sieve_upto(n: u64) -> Result<PrimeTable> {
    sieve_upto_with(n, MemBudget::default())
}

pub fn sieve_upto_with(n: u64, budget: MemBudget) -> Result<PrimeTable> {
    if n < 2 {
        return Err(Error::domain(format!("sieve limit must be >= 2, got {n}")));
    }
    budget.check_limit("whole-range sieve", n)?;
    // slots 0..=n/2 stand for 1, 3, 5, ..., the largest odd <= n
    let slots = n / 2 + 1;
    let words = slots.div_ceil(64) as usize;
    let mut bits = vec![u64::MAX; words];
    let clear = |bits: &mut Vec<u64>, i: u64| bits[(i / 64) as usize] &= !(1u64 << (i % 64));
    clear(&mut bits, 0); // 1 is not prime
    let max_odd = if n % 2 == 1 { n } else { n - 1 };
    let mut q = 3u64;
    while q * q <= max_odd {
        if bits[(q / 2 / 64) as usize] >> (q / 2 % 64) & 1 == 1 {
            let mut m = q * q;
            while m <= max_odd {
                clear(&mut bits, m / 2);
                m += 2 * q;
            }
        }
        q += 2;
    }
    // drop padding past the last valid slot
    let valid = max_odd / 2 + 1;
    for i in valid..(words as u64 * 64) {
        clear(&mut bits, i);
    }
    let count = bits.iter().map(|w| w.count_ones() as u64).sum::<u64>() + 1;
    Ok(PrimeTable {
        limit: n,
        bits,
        count,
    })
}

/// Segmented odd-only sieve with its own base-prime generation.
#[derive(Debug, Clone, Copy)]
pub struct SegmentedSieve {
    /// Odd candidates per segment.
    pub segment_len: usize,
    pub budget: MemBudget,
}

impl Default for SegmentedSieve {
    fn default() -> Self {
        SegmentedSieve {
            segment_len: DEFAULT_SEGMENT_LEN,
            budget: MemBudget::default(),
        }
    }
}

impl SegmentedSieve {
    pub fn with_budget(budget: MemBudget) -> Self {
        SegmentedSieve {
            budget,
            ..Default::default()
        }
    }

    fn base_primes(limit: u64) -> Vec<u64> {
        // byte sieve over [0, limit], limit <= 2^32
        let limit = limit as usize;
        let mut composite = vec![false; limit + 1];
        let mut out = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                out.push(i as u64);
                let mut m = i * i;
                while m <= limit {
                    composite[m] = true;
                    m += i;
                }
            }
        }
        out
    }

    fn check(&self, lo: u64, hi: u64) -> Result<()> {
        if lo < 2 || lo > hi {
            return Err(Error::domain(format!(
                "segment bounds need 2 <= lo <= hi, got [{lo}, {hi}]"
            )));
        }
        if self.segment_len == 0 {
            return Err(Error::domain("segment length must be positive"));
        }
        let seg_bytes = self.segment_len as u64;
        let base_bytes = isqrt(hi) + 1;
        if seg_bytes + base_bytes > self.budget.bytes {
            return Err(Error::Capacity {
                what: "sieve segment".into(),
                needed: seg_bytes + base_bytes,
                budget: self.budget.bytes,
            });
        }
        Ok(())
    }

    /// Calls `f` on every prime in `[lo, hi]`, ascending. Stops early when
    /// `f` returns `false`.
    pub fn for_each_prime(&self, lo: u64, hi: u64, mut f: impl FnMut(u64) -> bool) -> Result<()> {
        self.check(lo, hi)?;
        if lo <= 2 && !f(2) {
            return Ok(());
        }
        let base: Vec<u64> = Self::base_primes(isqrt(hi)).into_iter().skip(1).collect();
        let first_odd = if lo <= 3 { 3 } else { lo | 1 };
        if first_odd > hi {
            return Ok(());
        }
        let mut marks = vec![false; self.segment_len];
        let mut seg_lo = first_odd;
        loop {
            // odd candidates seg_lo, seg_lo + 2, ..., seg_hi
            let span = (self.segment_len as u64 - 1) * 2;
            let seg_hi = seg_lo.saturating_add(span).min(hi);
            let len = ((seg_hi - seg_lo) / 2 + 1) as usize;
            marks[..len].fill(false);
            for &q in &base {
                let sq = q * q;
                if sq > seg_hi {
                    break;
                }
                let mut m = if sq >= seg_lo {
                    sq
                } else {
                    let k = seg_lo.div_ceil(q);
                    match k.checked_mul(q) {
                        Some(m) => m,
                        None => continue,
                    }
                };
                if m % 2 == 0 {
                    m = match m.checked_add(q) {
                        Some(m) => m,
                        None => continue,
                    };
                }
                if m > seg_hi {
                    continue;
                }
                let mut idx = ((m - seg_lo) / 2) as usize;
                while idx < len {
                    marks[idx] = true;
                    idx += q as usize;
                }
            }
            for (i, &composite) in marks[..len].iter().enumerate() {
                if !composite {
                    let n = seg_lo + 2 * i as u64;
                    if n > 1 && !f(n) {
                        return Ok(());
                    }
                }
            }
            match seg_hi.checked_add(2) {
                Some(next) if seg_hi < hi && next <= hi => seg_lo = next,
                _ => return Ok(()),
            }
        }
    }

    /// Primes in the closed interval `[lo, hi]`.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        self.for_each_prime(lo, hi, |p| {
            out.push(p);
            true
        })?;
        Ok(out)
    }

    pub fn count_in(&self, lo: u64, hi: u64) -> Result<u64> {
        let mut n = 0u64;
        self.for_each_prime(lo, hi, |_| {
            n += 1;
            true
        })?;
        Ok(n)
    }
}

/// Primes in `[lo, hi]` with default segment size and budget.
pub fn segmented_sieve(lo: u64, hi: u64) -> Result<Vec<u64>> {
    SegmentedSieve::default().primes_in(lo, hi)
}

/// Smallest prime strictly greater than `n`, by trial division.
pub fn next_prime_oracle(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::domain(format!(
            "next_prime_oracle needs n >= 2, got {n}"
        )));
    }
    let mut c = n;
    loop {
        c = c
            .checked_add(1)
            .ok_or_else(|| Error::overflow(format!("no prime above {n} fits in u64")))?;
        if is_prime_trial(c) {
            return Ok(c);
        }
    }
}

/// An upper bound on the i-th prime (Rosser: p_i < i (ln i + ln ln i) for i >= 6).
pub fn nth_prime_upper_bound(i: u64) -> u64 {
    if i < 6 {
        return 13;
    }
    let x = i as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

pub fn nth_prime(i: u64) -> Result<u64> {
    nth_prime_with(i, MemBudget::default())
}

/// The i-th prime, with `P_1 = 2`.
pub fn nth_prime_with(i: u64, budget: MemBudget) -> Result<u64> {
    if i == 0 {
        return Err(Error::domain("prime index starts at 1"));
    }
    let bound = nth_prime_upper_bound(i);
    budget.check_limit("nth_prime sieve", bound)?;
    let mut seen = 0u64;
    let mut found = None;
    SegmentedSieve::with_budget(budget).for_each_prime(2, bound, |p| {
        seen += 1;
        if seen == i {
            found = Some(p);
            false
        } else {
            true
        }
    })?;
    found.ok_or_else(|| Error::Overflow(format!("prime #{i} lies above the bound {bound}")))
}

pub fn prime_count(n: u64) -> Result<u64> {
    prime_count_with(n, MemBudget::default())
}

/// pi(n), exact.
pub fn prime_count_with(n: u64, budget: MemBudget) -> Result<u64> {
    if n < 2 {
        return Ok(0);
    }
    budget.check_limit("prime_count sieve", n)?;
    SegmentedSieve::with_budget(budget).count_in(2, n)
}

/// The first `count` primes, ascending, from a whole-range sieve.
pub fn first_primes(count: usize, budget: MemBudget) -> Result<Vec<u64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let bound = nth_prime_upper_bound(count as u64);
    let table = sieve_upto_with(bound, budget)?;
    let primes: Vec<u64> = table.iter().take(count).collect();
    debug_assert_eq!(primes.len(), count);
    Ok(primes)
}
