#![no_main]

use libfuzzer_sys::fuzz_target;
use slackprime::slack::{alpha, remainder, slack, slack_remainder_dual, Divisor, QuotientSweep};

fuzz_target!(|input: (u64, u64, u16)| {
    let (p, d, span) = input;
    let Ok(dv) = Divisor::new(d) else { return };
    match slack(p, dv) {
        Ok(s) => {
            let r = remainder(p, dv).get();
            assert_eq!((p as u128 + s.get() as u128) % d as u128, 0);
            assert_eq!(slack_remainder_dual(dv, s).unwrap().get(), r);
            assert!(alpha(p, dv).equals_fractional_part(p, d));
        }
        Err(_) => assert!(p < 2 || (p / d + 1).checked_mul(d).is_none()),
    }
    let end = d.saturating_add(span as u64);
    for (k, q, r) in QuotientSweep::new(p, d, end) {
        assert_eq!((q, r), (p / k, p % k));
    }
});
