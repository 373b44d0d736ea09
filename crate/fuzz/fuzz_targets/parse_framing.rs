#![no_main]

use libfuzzer_sys::fuzz_target;
use mingenus_cli::parse_framing;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_framing(text);
    }
});
