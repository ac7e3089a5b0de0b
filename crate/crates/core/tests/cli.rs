//! End-to-end runs of the `hyperheat` binary.
//!
//! Golden CSVs live in `tests/golden/`; run with `HYPERHEAT_UPDATE_GOLDEN=1`
//! to regenerate them after an intentional change.

use std::path::PathBuf;
use std::process::{Command, Output};

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> String {
    manifest().join("tests/fixtures").join(name).display().to_string()
}

fn hyperheat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperheat"))
        .args(args)
        .env_remove("HYPERHEAT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Same header, same row count, identical text fields and numeric fields
/// within `1e-12` relative (exact on the platform the golden came from).
fn assert_matches_golden(name: &str, actual: &str) {
    let path = manifest().join("tests/golden").join(name);
    if std::env::var_os("HYPERHEAT_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (set HYPERHEAT_UPDATE_GOLDEN=1)", path.display()));
    let parse = |text: &str| {
        csv::ReaderBuilder::new()
            .from_reader(text.as_bytes())
            .records()
            .map(|r| r.unwrap().iter().map(str::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    let (e_lines, a_lines) = (expected.lines().next(), actual.lines().next());
    assert_eq!(e_lines, a_lines, "{name}: header changed");
    let (e, a) = (parse(&expected), parse(actual));
    assert_eq!(e.len(), a.len(), "{name}: row count");
    for (i, (er, ar)) in e.iter().zip(&a).enumerate() {
        assert_eq!(er.len(), ar.len());
        for (ef, af) in er.iter().zip(ar) {
            match (ef.parse::<f64>(), af.parse::<f64>()) {
                (Ok(x), Ok(y)) => assert!(
                    x == y || (x - y).abs() <= 1e-12 * x.abs().max(y.abs()),
                    "{name} row {i}: {x} vs {y}"
                ),
                _ => assert_eq!(ef, af, "{name} row {i}"),
            }
        }
    }
}

#[test]
fn parseval_tiny_grid() {
    let o = hyperheat(&["parseval-check", "--grid-q", "1,5", "--grid-t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    // Order one is the plane: both sides are exactly zero.
    assert!(text.lines().nth(1).unwrap().starts_with("1,1.0,0.0,0.0,0.0,0.0,0.0,ok"));
    assert_matches_golden("parseval_tiny.csv", &text);
}

#[test]
fn parseval_single_point() {
    let o = hyperheat(&["parseval-check", "--grid-q", "5", "--grid-t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn bound_tiny_grid() {
    let o = hyperheat(&[
        "bound-check", "--grid-q", "3,100", "--grid-delta", "1", "--grid-t", "1", "--grid-s", "0,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    // s = 0 rows have a real trace.
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let im = headers.iter().position(|h| h == "trace_im").unwrap();
    let s = headers.iter().position(|h| h == "s").unwrap();
    for r in rdr.records() {
        let r = r.unwrap();
        if r[s].parse::<f64>().unwrap() == 0.0 {
            assert_eq!(r[im].parse::<f64>().unwrap(), 0.0);
        }
    }
    assert_matches_golden("bound_tiny.csv", &text);
}

#[test]
fn degeneration_tiny_grid_and_bad_group() {
    let o = hyperheat(&[
        "degeneration-sweep", "--grid-n", "3", "--grid-t", "1", "--max-word-len", "16",
        "--trace-bound", "50",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
    assert_matches_golden("degeneration_tiny.csv", &stdout(&o));

    // N = 2 is not a hyperbolic Hecke group: that row fails, the run goes on
    // and exits with the failure code.
    let o = hyperheat(&[
        "degeneration-sweep", "--grid-n", "2,3", "--max-word-len", "16", "--trace-bound", "50",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(2).unwrap().ends_with(",ok"));
}

#[test]
fn stf_without_eigenvalues_leaves_spectral_columns_empty() {
    let o = hyperheat(&["stf-eval", "--fixture", &fixture("two_cone.json"), "--grid-t", "0.5,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",,,ok"), "{line}");
    }
    assert_matches_golden("stf_two_cone.csv", &text);
}

#[test]
fn stf_with_eigenvalues_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stf.csv");
    let o = hyperheat(&[
        "stf-eval",
        "--fixture",
        &fixture("genus2_synthetic.json"),
        "--eigenvalues",
        &fixture("genus2_synthetic.eig"),
        "--grid-t",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty(), "CSV goes to the file when --out is given");
    let text = std::fs::read_to_string(&out).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(!row.contains(",,"), "spectral columns present: {row}");
    assert_matches_golden("stf_genus2_eig.csv", &text);

    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("stf.csv.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["command"], "stf-eval");
    assert_eq!(sidecar["config"]["convention"], "distinct");
    assert!(sidecar["columns"]["rel_diff"].is_string());
    assert_eq!(sidecar["summary"]["points"], 1);
}

#[test]
fn identified_convention_and_rel_tol_flow_into_the_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = hyperheat(&[
        "--convention-inverse-classes",
        "identified",
        "--rel-tol",
        "1e-9",
        "--threads",
        "2",
        "parseval-check",
        "--grid-q",
        "3",
        "--grid-t",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.csv.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["config"]["convention"], "identified");
    assert_eq!(sidecar["config"]["quad"]["rel_tol"], 1e-9);
}

#[test]
fn cache_dir_is_populated() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "degeneration-sweep",
        "--grid-n",
        "4",
        "--max-word-len",
        "12",
        "--trace-bound",
        "40",
    ];
    let first = hyperheat(&args);
    assert_eq!(first.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = hyperheat(&args);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn runs_are_deterministic() {
    let args = ["bound-check", "--grid-q", "3,7", "--grid-delta", "0.5", "--grid-t", "1", "--grid-s", "0,2"];
    assert_eq!(stdout(&hyperheat(&args)), stdout(&hyperheat(&args)));
}

#[test]
fn usage_errors() {
    let missing = hyperheat(&["stf-eval", "--fixture", "/definitely/not/here.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/definitely/not/here.json"));

    let bad_convention = hyperheat(&["--convention-inverse-classes", "both", "parseval-check"]);
    // Usage errors exit 1; 2 is reserved for tolerance violations.
    assert_eq!(bad_convention.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_convention.stderr).contains("unknown inverse-class convention"));
}

#[test]
fn help_documents_every_flag() {
    let help = stdout(&hyperheat(&["--help"]));
    for flag in ["--out", "--rel-tol", "--threads", "--convention-inverse-classes", "--cache-dir"] {
        assert!(help.contains(flag), "{flag} missing from --help");
    }
    let sub = |name: &str| stdout(&hyperheat(&[name, "--help"]));
    assert!(sub("parseval-check").contains("--grid-q"));
    let b = sub("bound-check");
    for flag in ["--grid-q", "--grid-delta", "--grid-t", "--grid-s"] {
        assert!(b.contains(flag));
    }
    assert!(sub("degeneration-sweep").contains("--grid-n"));
    assert!(sub("stf-eval").contains("--fixture"));
}
