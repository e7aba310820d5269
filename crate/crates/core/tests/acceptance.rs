//! Acceptance criteria. Runs as a plain binary (`harness = false`) so every
//! criterion prints one PASS/FAIL line regardless of output capture.
//!
//! `cargo test -p slackprime --test acceptance`

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slackprime::gaps::paper_gap_bound;
use slackprime::harness::{
    run_bench, run_gap_bound_campaign, run_next_prime_campaign, run_twin_campaign, CampaignConfig,
    CampaignKind, CampaignReport, ClaimKind,
};
use slackprime::next_prime::{
    build_slack_list, first_missing_even, next_prime_slack, successor_upper_bound, SlackList,
};
use slackprime::oracle::{
    is_prime_trial, prime_count, segmented_sieve, sieve_upto, SegmentedSieve,
};
use slackprime::slack::{remainder, slack, Divisor};
use slackprime::twin::{r_constraint_violations, twin_pairs_upto};

struct Outcome {
    pass: bool,
    detail: String,
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        detail: detail.into(),
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    Outcome { pass: ok, detail }
}

fn pairs(list: &SlackList) -> Vec<(u64, u64)> {
    list.entries()
        .iter()
        .map(|e| (e.divisor, e.slack))
        .collect()
}

/// Sieve of Eratosthenes over a byte array; shares no code with the library.
fn brute_primes(limit: usize) -> Vec<u64> {
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

fn criterion_1() -> Outcome {
    let golden: [(u64, &[(u64, u64)]); 4] = [
        (11, &[(2, 1), (3, 1), (4, 1), (5, 4)]),
        (
            29,
            &[
                (2, 1),
                (3, 1),
                (4, 3),
                (5, 1),
                (6, 1),
                (7, 6),
                (8, 3),
                (9, 7),
                (10, 1),
                (11, 4),
                (12, 7),
                (13, 10),
                (14, 13),
            ],
        ),
        (7, &[(2, 1), (3, 2)]),
        (5, &[(2, 1)]),
    ];
    let t = Instant::now();
    let mut bad = Vec::new();
    for (p, table) in golden {
        match build_slack_list(p) {
            Ok(list) if pairs(&list) == table => {}
            other => bad.push(format!("p={p}: {:?}", other.map(|l| pairs(&l)))),
        }
    }
    let took = t.elapsed();
    if !bad.is_empty() {
        return fail(bad.join("; "));
    }
    check(
        took < Duration::from_millis(1),
        format!("4 tables exact in {took:?} (limit 1 ms)"),
    )
}

fn criterion_2() -> Outcome {
    let expected = [
        (5, 2, 7, true),
        (7, 4, 11, true),
        (11, 2, 13, false),
        (29, 2, 31, false),
    ];
    let t = Instant::now();
    let mut bad = Vec::new();
    for (p, e, succ, beyond) in expected {
        match next_prime_slack(p) {
            Ok(r) if (r.e, r.successor, r.used_beyond_range) == (e, succ, beyond) => {}
            other => bad.push(format!("p={p}: {other:?}")),
        }
    }
    let took = t.elapsed();
    if !bad.is_empty() {
        return fail(bad.join("; "));
    }
    check(
        took < Duration::from_millis(1),
        format!("5->7, 7->11, 11->13, 29->31 with E = 2,4,2,2 in {took:?} (limit 1 ms)"),
    )
}

fn next_prime_run(count: u64, limit: Duration) -> Result<(CampaignReport, Duration), String> {
    let cfg = CampaignConfig::new(CampaignKind::NextPrime, 3, count);
    let t = Instant::now();
    let report = run_next_prime_campaign(cfg).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    if took > limit {
        return Err(format!("{count} primes took {took:?}, limit {limit:?}"));
    }
    Ok((report, took))
}

fn well_formed(report: &CampaignReport) -> bool {
    report
        .discrepancies
        .iter()
        .all(|d| d.claimed != d.oracle && d.index >= 3)
}

fn criterion_3(reports: &mut Vec<CampaignReport>) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (count, limit) in [
        (10_000u64, Duration::from_secs(10)),
        (99_998, Duration::from_secs(600)),
    ] {
        match next_prime_run(count, limit) {
            Ok((r, took)) => {
                ok &= r.primes_checked == count && well_formed(&r);
                // a discrepancy is a finding, not a failure, provided it was recorded
                notes.push(format!(
                    "indices 3..{}: {} checked, {} discrepancies, {took:.2?}",
                    count + 2,
                    r.primes_checked,
                    r.discrepancies.len()
                ));
                reports.push(r);
            }
            Err(e) => {
                ok = false;
                notes.push(e);
            }
        }
    }
    let last = sieve_upto(1_299_709).map(|t| t.count()).unwrap_or(0);
    ok &= last == 100_000;
    notes.push(format!("pi(1299709) = {last}"));
    check(ok, notes.join("; "))
}

fn criterion_4() -> Outcome {
    // pairs (p_i, p_{i+1}) with both members below 10^6: indices 1..=78497
    let pairs_below = prime_count(1_000_000).unwrap() - 1;
    let cfg = CampaignConfig::new(CampaignKind::GapBound, 1, pairs_below);
    let t = Instant::now();
    let report = match run_gap_bound_campaign(cfg) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let took = t.elapsed();
    // independent recomputation of the largest gap
    let brute = brute_primes(1_000_000);
    let brute_max = brute.windows(2).map(|w| w[1] - w[0]).max().unwrap();
    let brute_violations = brute
        .windows(2)
        .filter(|w| w[1] - w[0] > paper_gap_bound(w[0]))
        .count();
    check(
        report.discrepancies.is_empty()
            && brute_violations == 0
            && report.max_observed_gap == brute_max
            && brute_max == 114
            && took < Duration::from_secs(5),
        format!(
            "{} pairs, {} violations, max gap {} (brute {brute_max}), {took:.2?} (limit 5 s)",
            report.primes_checked,
            report.discrepancies.len(),
            report.max_observed_gap
        ),
    )
}

fn criterion_5() -> Outcome {
    // primes 5 <= p < 10^6: indices 3..=78498
    let cfg = CampaignConfig::new(CampaignKind::Twin, 3, prime_count(999_999).unwrap() - 2);
    let t = Instant::now();
    let report = match run_twin_campaign(cfg) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let took = t.elapsed();
    let brute = brute_primes(10_000);
    let brute_twins = brute
        .iter()
        .filter(|&&p| p >= 5 && brute.binary_search(&(p + 2)).is_ok())
        .count();
    let found = twin_pairs_upto(10_000, false, Default::default())
        .map(|v| v.len())
        .unwrap_or(0);
    // Frozen from the brute force above. The figure 203 quoted alongside this
    // criterion does not survive the stated derivation (it yields 204).
    const TWINS_BELOW_10K_FROM_5: usize = 204;
    check(
        report.discrepancies.is_empty()
            && took < Duration::from_secs(30)
            && found == brute_twins
            && found == TWINS_BELOW_10K_FROM_5,
        format!(
            "{} primes, {} mismatches, {} leaders, {took:.2?} (limit 30 s); twins below 10^4 from 5: {found} (brute {brute_twins}, quoted 203)",
            report.primes_checked,
            report.discrepancies.len(),
            report.twin_leaders.unwrap_or(0)
        ),
    )
}

fn criterion_6() -> Outcome {
    let table = sieve_upto(100_000).unwrap();
    let pool: Vec<u64> = table.iter().filter(|&p| p >= 7).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut counterexamples = Vec::new();
    let mut agree_twin = 0;
    for _ in 0..100_000 {
        let p = pool[rng.gen_range(0..pool.len())];
        let list = build_slack_list(p).unwrap();
        let in_range_two = first_missing_even(&list) == (2, false);
        let clean = r_constraint_violations(p).unwrap().is_empty();
        if in_range_two != clean {
            counterexamples.push(p);
        }
        agree_twin += usize::from(clean);
    }
    check(
        counterexamples.is_empty(),
        format!(
            "100000 random primes in [7, 10^5]: {} counterexamples, {agree_twin} twin leaders drawn",
            counterexamples.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut failures = 0u64;
    let mut divisible = 0u64;
    for k in 0..1_000_000u64 {
        // alternate wide and narrow draws so that d | p actually occurs
        let (p, d) = if k % 2 == 0 {
            (
                rng.gen_range(2..=u64::MAX / 2),
                rng.gen_range(2..=u64::MAX / 4),
            )
        } else {
            (rng.gen_range(2..=1_000_000u64), rng.gen_range(2..=1_000u64))
        };
        let dv = Divisor::new(d).unwrap();
        let s = slack(p, dv).unwrap().get();
        let r = remainder(p, dv).get();
        let sum_ok = if r == 0 {
            divisible += 1;
            s == d
        } else {
            s + r == d
        };
        let mult_ok = ((p as u128 + s as u128) % d as u128) == 0;
        if !(sum_ok && mult_ok) {
            failures += 1;
        }
    }
    check(
        failures == 0,
        format!("10^6 random (p, d): {failures} failures ({divisible} divisible pairs)"),
    )
}

fn criterion_8(reports: &[CampaignReport]) -> Outcome {
    if reports.is_empty() {
        return fail("criterion 3 produced no reports");
    }
    let mut notes = Vec::new();
    let mut ok = true;
    for r in reports {
        let eq5 = r
            .discrepancies
            .iter()
            .filter(|d| d.claim_kind == ClaimKind::Eq5Bound)
            .count();
        let last_p =
            slackprime::oracle::nth_prime(r.config.start_index + r.config.count - 1).unwrap();
        // the campaign checks every prime against its own ceiling and files
        // eq5-bound records; this is only a coarse cross-check on the maximum
        ok &= eq5 == 0 && (r.max_observed_e as u128) < successor_upper_bound(last_p);
        notes.push(format!(
            "{} primes: eq5 violations {eq5}, max E {}, beyond-range uses {}",
            r.primes_checked, r.max_observed_e, r.beyond_range_uses
        ));
    }
    check(ok, notes.join("; "))
}

fn criterion_9() -> Outcome {
    let mut notes = Vec::new();
    let t = Instant::now();
    let table = match sieve_upto(100_000_000) {
        Ok(t) => t,
        Err(e) => return fail(e.to_string()),
    };
    notes.push(format!("whole sieve to 10^8 in {:.2?}", t.elapsed()));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut mismatches = 0u64;
    for _ in 0..1_000 {
        let lo = rng.gen_range(2..=100_000_000u64 - 10_000);
        let hi = lo + 10_000 - 1;
        let seg = segmented_sieve(lo, hi).unwrap();
        let mut at = 0;
        for n in lo..=hi {
            let by_seg = seg.get(at) == Some(&n);
            if by_seg {
                at += 1;
            }
            let by_table = table.is_prime(n) == Some(true);
            let by_trial = is_prime_trial(n);
            if by_seg != by_table || by_table != by_trial {
                mismatches += 1;
            }
        }
    }
    notes.push(format!(
        "1000 intervals of width 10^4: {mismatches} disagreements"
    ));
    let pi6 = prime_count(1_000_000).unwrap();
    let pi6_table = sieve_upto(1_000_000).unwrap().count();
    let pi6_brute = brute_primes(1_000_000).len() as u64;
    notes.push(format!(
        "pi(10^6) = {pi6} (table {pi6_table}, brute {pi6_brute})"
    ));
    let t = Instant::now();
    let pi8 = SegmentedSieve::default().count_in(2, 100_000_000).unwrap();
    let seg_time = t.elapsed();
    notes.push(format!(
        "segmented to 10^8: {pi8} primes in {seg_time:.2?} (limit 60 s)"
    ));
    check(
        mismatches == 0
            && pi6 == 78_498
            && pi6_table == 78_498
            && pi6_brute == 78_498
            && pi8 == table.count()
            && seg_time < Duration::from_secs(60),
        notes.join("; "),
    )
}

fn criterion_10() -> Outcome {
    let mut cfg = CampaignConfig::new(CampaignKind::Bench, 3, 40);
    cfg.bench_scales = vec![10_000, 100_000, 1_000_000];
    let report = match run_bench(cfg) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let rows = report.bench.clone().unwrap_or_default();
    let by_scale: BTreeMap<u64, _> = rows.iter().map(|r| (r.scale, r)).collect();
    let (Some(r4), Some(r5), Some(r6)) = (
        by_scale.get(&10_000),
        by_scale.get(&100_000),
        by_scale.get(&1_000_000),
    ) else {
        return fail("missing bench rows");
    };
    let slack_ratio = r5.slack_ns_per_prime / r4.slack_ns_per_prime;
    let sieve_45 = r5.sieve_ns_per_prime / r4.sieve_ns_per_prime;
    let sieve_56 = r6.sieve_ns_per_prime / r5.sieve_ns_per_prime;
    let mut table = String::from("\n      scale   slack ns/prime   sieve ns/prime");
    for r in &rows {
        table.push_str(&format!(
            "\n    {:>7}   {:>14.0}   {:>14.2}",
            r.scale, r.slack_ns_per_prime, r.sieve_ns_per_prime
        ));
    }
    check(
        (5.0..=15.0).contains(&slack_ratio)
            && sieve_45 < 10.0
            && sieve_56 < 10.0
            && report.discrepancies.is_empty(),
        format!(
            "slack cost ratio 10^5/10^4 = {slack_ratio:.2} (want 10 +/- 50%); sieve per-prime ratios {sieve_45:.2}, {sieve_56:.2} (sub-linear < 10){table}"
        ),
    )
}

fn main() {
    let mut reports = Vec::new();
    let started = Instant::now();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "slack tables for 11, 29, 7, 5", criterion_1()),
        (2, "worked successor examples", criterion_2()),
        (
            3,
            "next-prime replication, 10^4 and 10^5 primes",
            criterion_3(&mut reports),
        ),
        (4, "gap bound below 10^6", criterion_4()),
        (5, "twin verdict equivalence below 10^6", criterion_5()),
        (6, "missing-even 2 iff no R-violation", criterion_6()),
        (7, "slack/remainder duality", criterion_7()),
        (8, "successor envelope", criterion_8(&reports)),
        (9, "oracle self-consistency", criterion_9()),
        (10, "slack method vs sieve cost growth", criterion_10()),
    ];
    let mut failed = 0;
    println!();
    for (n, name, o) in &results {
        println!(
            "criterion {n:>2} [{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "\nacceptance: {} passed, {failed} failed in {:.1?}",
        results.len() - failed,
        started.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
