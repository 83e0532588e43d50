#![no_main]

use blockpic_cli::job::{fmt_matrix, parse_matrix, parse_matrix_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_matrix_list(text);
    if let Some(m) = parse_matrix(text) {
        assert_eq!(parse_matrix(&fmt_matrix(&m)), Some(m));
    }
});
