//! Black-box tests of the cert-cli binary: output formats, golden values,
//! and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn cert(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cert-cli"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn build_then_evaluate_example1() {
    let dir = tempfile::tempdir().unwrap();
    let out = cert(
        &["witness-build", "--map", "transpose", "--seeds", "flip:3,2", "--out", "w.json"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("w.json").is_file());

    let out = cert(&["evaluate", "--witness", "w.json", "--state", "ghz:3,2"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("value = -0.5"), "{text}");
    assert!(text.contains("GME-DETECTED"), "{text}");
}

#[test]
fn noise_robustness_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = cert(&["noise-robustness", "--lambda", "1/9", "--map", "choi3"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("p_crit = 0.050279"), "{text}");

    // undetected family member: reported, exit 0, no p_crit
    let out = cert(&["noise-robustness", "--lambda", "0.5", "--map", "choi3"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("no p_crit"));
}

#[test]
fn region_scan_csv_contract() {
    let dir = tempfile::tempdir().unwrap();
    let out = cert(&["region-scan", "--steps", "11", "--out", "region.csv"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("region.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "p,q,value_ppt,value_choi,verdict");
    assert_eq!(lines.count(), 121);
    assert!(!text.contains('\r'));
    let rows = gme_cli::io::parse_region_csv(&text).unwrap();
    assert_eq!(rows.len(), 121);
}

#[test]
fn lambda_scan_window_in_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = cert(
        &["lambda-scan", "--map", "choi3", "--from", "0.2", "--to", "0.5", "--steps", "2"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,value,verdict");
    assert!(lines[1].starts_with("0.2") && lines[1].ends_with("GME-DETECTED"), "{text}");
    assert!(lines[2].starts_with("0.5") && lines[2].ends_with("UNDETECTED"), "{text}");
}

#[test]
fn checks_print_per_cut_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = cert(&["ppt-check", "--state", "ghz:3,2"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("0|12") && text.contains("01|2") && text.contains("02|1"), "{text}");
    assert!(text.lines().all(|l| l.contains("-5.0000")), "{text}");

    let out = cert(&["map-check", "--state", "rho-lambda:0.5", "--map", "choi3"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).lines().all(|l| l.contains("-")), "{}", stdout(&out));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // usage errors: unknown flag, unknown map, malformed state spec
    assert_eq!(cert(&["evaluate", "--bogus"], dir.path()).status.code(), Some(1));
    assert_eq!(
        cert(&["map-check", "--state", "ghz:3,3", "--map", "nonsense"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(
        cert(&["ppt-check", "--state", "wat:1"], dir.path()).status.code(),
        Some(1)
    );

    // numerical-validation failures: malformed file, non-Hermitian input
    std::fs::write(dir.path().join("broken.json"), "{not json").unwrap();
    let out = cert(&["evaluate", "--witness", "broken.json", "--state", "ghz:3,2"], dir.path());
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));

    std::fs::write(
        dir.path().join("skew.json"),
        r#"{"dims":[2],"matrix":[[[0,0],[1,0]],[[5,0],[0,0]]]}"#,
    )
    .unwrap();
    let out = cert(&["evaluate", "--witness", "skew.json", "--state", "ghz:2,2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not Hermitian"));

    // dimension conflict between witness and state
    let ok = cert(
        &["witness-build", "--map", "transpose", "--seeds", "flip:3,2", "--out", "w.json"],
        dir.path(),
    );
    assert!(ok.status.success());
    let out = cert(&["evaluate", "--witness", "w.json", "--state", "ghz:3,3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_json_roundtrips_through_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let out = cert(
        &["witness-build", "--map", "choi3", "--seeds", "ghz:3,3", "--out", "choi_w.json"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let out = cert(
        &["evaluate", "--witness", "choi_w.json", "--state", "rho-lambda:0.2"], dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("GME-DETECTED"));
    let out = cert(
        &["evaluate", "--witness", "choi_w.json", "--state", "two-param:0,1"], dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("GME-DETECTED"));
}
