#![no_main]

use libfuzzer_sys::fuzz_target;
use mingenus::report::{deserialize_report, serialize_report};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = deserialize_report(text) {
        let out = serialize_report(&r);
        assert_eq!(deserialize_report(&out).expect("serialized report reads back"), r);
    }
});
