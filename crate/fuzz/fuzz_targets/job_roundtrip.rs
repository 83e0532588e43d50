#![no_main]

use blockpic_cli::{parse_input, print_job};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(jobs) = parse_input(text) else { return };
    let printed: String = jobs.iter().map(print_job).collect();
    let again = parse_input(&printed).expect("printed jobs parse");
    assert_eq!(jobs, again);
});
