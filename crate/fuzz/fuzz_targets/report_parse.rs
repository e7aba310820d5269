#![no_main]

use libfuzzer_sys::fuzz_target;
use slackprime::harness::read_report;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(report) = read_report(text) {
            let _ = report.is_clean();
            let _ = report.timing_stripped();
        }
    }
});
