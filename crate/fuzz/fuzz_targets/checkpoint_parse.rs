#![no_main]

use libfuzzer_sys::fuzz_target;
use slackprime::checkpoint::Checkpoint;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // must never panic; accepted input has a contiguous-looking header
        if let Ok(Some(ck)) = Checkpoint::parse(text) {
            assert_eq!(ck.header.version, slackprime::checkpoint::CHECKPOINT_VERSION);
        }
    }
});
