#![no_main]

use libfuzzer_sys::fuzz_target;
use mingenus::presentation::parse_presentation;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_presentation(text) {
        // printed form must parse back to the same presentation
        let again = parse_presentation(&p.to_string()).expect("display reparses");
        assert_eq!(again, p);
    }
});
