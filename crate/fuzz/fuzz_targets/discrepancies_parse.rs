#![no_main]

use libfuzzer_sys::fuzz_target;
use slackprime::harness::{read_discrepancies, write_discrepancies};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(records) = read_discrepancies(text) else { return };
    // anything accepted survives a round trip
    let mut buf = Vec::new();
    write_discrepancies(&mut buf, &records).unwrap();
    let again = read_discrepancies(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(records, again);
});
