use std::fs;
use std::path::Path;
use std::process::Command;

use mingenus_cli::{run, KIRBY_FILE, REPORT_FILE, STAGE_FILES};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mingenus"))
}

fn run_in(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mingenus").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn build_report(dir: &Path, presentation: &str) -> String {
    let d = dir.to_str().unwrap();
    let (code, out, err) = run_in(&["build", presentation, "--out", d]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("g="));
    fs::read_to_string(dir.join(REPORT_FILE)).unwrap()
}

#[test]
fn build_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out, _) = run_in(&["build", "<x | x^5>", "--out", d]);
    assert_eq!((code, out.trim()), (0, "g=3 chi=2 k=(1,1,1) status=PROVEN"));
    let (code, out, _) = run_in(&["build", "< | >", "--out", d]);
    assert_eq!((code, out.trim()), (0, "g=0 chi=2 k=(0,0,0) status=PROVEN"));
    let (code, out, _) = run_in(&[
        "build",
        "<x,y,z | x^3 y^-2, [y,z]>",
        "--stabilize-s2xs2",
        "1",
        "--out",
        d,
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("g=9 chi=2 "), "{out}");
}

#[test]
fn build_reads_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    fs::write(&input, "<a, b | a^2, b^3, (a b)^5>\n").unwrap();
    let (code, out, _) = run_in(&[
        "build",
        "--file",
        input.to_str().unwrap(),
        "--framing",
        "1,-1,0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "g=8 chi=4 k=(2,2,2) status=CONDITIONAL");
    let report = fs::read_to_string(dir.path().join(REPORT_FILE)).unwrap();
    assert!(report.contains("framings: 1, -1, 0"));
    assert!(report.contains("framing_parities: 1, 1, 0"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(run_in(&["build", "<x | y>", "--out", d]).0, 1);
    assert_eq!(run_in(&["build", "<x | x", "--out", d]).0, 1);
    assert_eq!(run_in(&["build", "--out", d]).0, 2);
    assert_eq!(run_in(&["build", "<x|x>", "--file", "nope", "--out", d]).0, 2);
    assert_eq!(run_in(&["build", "<x|x>", "--framing", "1,2", "--out", d]).0, 2);
    assert_eq!(run_in(&["build", "<x|x>", "--framing", "a", "--out", d]).0, 2);
    assert_eq!(run_in(&["build", "<x|x>", "--emit", "pdf", "--out", d]).0, 2);
    assert_eq!(run_in(&["frobnicate"]).0, 2);
    assert_eq!(run_in(&["verify", "/definitely/not/here"]).0, 2);
    assert_eq!(run_in(&["--help"]).0, 0);
}

#[test]
fn verify_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let report = build_report(dir.path(), "<x,y,z | x^3 y^-2, [y,z]>");
    let path = dir.path().join(REPORT_FILE);
    let p = path.to_str().unwrap();
    let (code, out, _) = run_in(&["verify", p]);
    assert_eq!(code, 0);
    assert!(out.starts_with("verified: g=7 chi=0"));
    assert_eq!(run_in(&["verify", "--file", p]).0, 0);

    fs::write(&path, report.replace("\ng: 7\n", "\ng: 8\n")).unwrap();
    let (code, _, err) = run_in(&["verify", p]);
    assert_eq!(code, 4);
    assert!(err.contains("certificate.g"), "{err}");

    fs::write(&path, report.replace("chain: 3, 3, 3, 3", "chain: 3, 3, 3, 2")).unwrap();
    let (code, _, err) = run_in(&["verify", p]);
    assert_eq!(code, 4);
    assert!(err.contains("chain"), "{err}");

    fs::write(&path, report.replace("chain: 3, 3, 3, 3", "chain: 4, 4, 4, 4")).unwrap();
    let (code, _, err) = run_in(&["verify", p]);
    assert_eq!(code, 4);
    assert!(err.contains("chain"), "{err}");

    fs::write(&path, report.replace("status: CONDITIONAL\n", "status: PROVEN\n")).unwrap();
    let (code, _, err) = run_in(&["verify", p]);
    assert_eq!(code, 4);
    assert!(err.contains("status"), "{err}");

    fs::write(&path, report.replace("\ncount: 4\n", "\ncount: 3\n")).unwrap();
    let (code, _, err) = run_in(&["verify", p]);
    assert_eq!(code, 4);
    assert!(err.contains("tunnels.count"), "{err}");

    fs::write(&path, &report[..report.len() / 2]).unwrap();
    assert_eq!(run_in(&["verify", p]).0, 1);
}

#[test]
fn verify_accepts_stabilized_and_framed_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, _, _) = run_in(&[
        "build",
        "<a,b | a b a^-1 b^-1, a^3>",
        "--framing",
        "-3,5",
        "--stabilize-cp2",
        "2",
        "--stabilize-cp2bar",
        "1",
        "--stabilize-s2xs2",
        "1",
        "--out",
        d,
    ]);
    assert_eq!(code, 0);
    let p = dir.path().join(REPORT_FILE);
    assert_eq!(run_in(&["verify", p.to_str().unwrap()]).0, 0);
}

#[test]
fn render_writes_four_deterministic_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let (code, out, _) = run_in(&[
            "render",
            "<x,y,z | x^3 y^-2, [y,z]>",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
    }
    for name in STAGE_FILES.iter().chain([&KIRBY_FILE]) {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between runs");
    }
    let s2 = fs::read_to_string(a.path().join(STAGE_FILES[1])).unwrap();
    assert!(s2.contains("Sliding the end of c1 (red) to produce x^3 y^-2"));
    assert!(!a.path().join(REPORT_FILE).exists());
}

#[test]
fn render_empty_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run_in(&["render", "< | >", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    for name in STAGE_FILES {
        let svg = fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(svg.contains(r#"class="basepoint""#));
        assert!(!svg.contains("dotted"));
    }
}

#[test]
fn binary_exit_status_and_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["build", "<x | x^2>", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "g=3 chi=2 k=(1,1,1) status=PROVEN"
    );
    let out = bin().args(["build", "<x | q>"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().arg("verify").arg(dir.path().join(REPORT_FILE)).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn argument_surface_never_crashes(args in prop::collection::vec(prop::sample::select(vec![
        "build", "verify", "render", "--file", "--framing", "--stabilize-s2xs2", "--stabilize-cp2",
        "--stabilize-cp2bar", "--emit", "report", "svg-stages", "svg-kirby", "1", "-2", "x",
        "<x | x^2>", "< | >", "<x,y | [x,y]>", "<x | y>", "1,2", "", "--bogus",
    ]), 0..7)) {
        let dir = tempfile::tempdir().unwrap();
        let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        argv.push("--out".into());
        argv.push(dir.path().to_str().unwrap().into());
        let mut full = vec!["mingenus".to_string()];
        full.extend(argv);
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(full, &mut out, &mut err);
        prop_assert!((0..=4).contains(&code));
        prop_assert!(code != 3, "internal error: {}", String::from_utf8_lossy(&err));
    }
}

#[test]
fn framing_seeds() {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/parse_framing");
    let mut ok = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        ok += usize::from(mingenus_cli::parse_framing(&text).is_ok());
    }
    assert!(ok >= 4);
}
