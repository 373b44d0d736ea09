//! Replays the checked-in fuzz seeds through the same checks the fuzz
//! targets make, so the corpus stays meaningful on stable toolchains.

use std::fs;
use std::path::PathBuf;

use mingenus::presentation::parse_presentation;
use mingenus::render::read_passages;
use mingenus::report::{deserialize_report, serialize_report};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn presentation_seeds() {
    let mut parsed = 0;
    for (path, text) in seeds("parse_presentation") {
        if let Ok(p) = parse_presentation(&text) {
            assert_eq!(parse_presentation(&p.to_string()).unwrap(), p, "{}", path.display());
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}

#[test]
fn report_seeds_round_trip() {
    for (path, text) in seeds("deserialize_report") {
        let r = deserialize_report(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(serialize_report(&r), text, "{}", path.display());
    }
}

#[test]
fn svg_seeds_read() {
    for (path, text) in seeds("read_passages") {
        read_passages(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
