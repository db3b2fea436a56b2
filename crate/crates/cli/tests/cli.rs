//! End-to-end tests of the `toric` binary: exit codes, error reporting,
//! golden outputs, and determinism across runs and worker counts.

use std::process::{Command, Output};

fn toric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8")
}

fn write_temp(name: &str, content: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("toric-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn example_verify_all_pass_exit_zero() {
    let out = toric(&["example", "wp", "1", "2", "--", "verify", "--cutoff", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("ALL CHECKS PASSED"), "{text}");
}

#[test]
fn bad_fan_exits_two_citing_cone() {
    let doc = r#"{
  "rank": 2,
  "rays": [[1, 0], [2, 0]],
  "max_cones": [[0, 1]],
  "kahler": [1, 1]
}"#;
    let path = write_temp("bad_fan.json", doc);
    let out = toric(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stderr(&out);
    assert!(text.contains("simplicial"), "{text}");
    assert!(text.contains("[0, 1]"), "{text}");
}

#[test]
fn parse_error_has_position() {
    let doc = r#"{
  "rank": 1,
  "rays": [[1], [-1]],
  "max_cones": [[0], [1]],
  "kahler": ["1/0", 0]
}"#;
    let path = write_temp("bad_rat.json", doc);
    let out = toric(&["box", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stderr(&out);
    assert!(text.contains("invalid rational"), "{text}");
    assert!(text.contains("line 5"), "{text}");
}

#[test]
fn football_box_listing() {
    let out = toric(&["example", "football", "2", "3", "--", "box"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("TOTAL 4 box elements"), "{text}");
    for age in ["age=0", "age=1/3", "age=1/2", "age=2/3"] {
        assert!(text.contains(age), "{text}");
    }
}

#[test]
fn example_documents_reparse() {
    let out = toric(&["example", "football", "2", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let path = write_temp("football23.json", &text);
    let out2 = toric(&["validate", path.to_str().unwrap()]);
    assert_eq!(out2.status.code(), Some(0));
    assert!(stdout(&out2).contains("FAN VALID"));
}

#[test]
fn verify_failure_exit_one() {
    // A convex but non-Kahler omega is an input error (exit 2)...
    let doc = r#"{
  "rank": 1,
  "rays": [[1], [-1]],
  "max_cones": [[0], [1]],
  "kahler": [1, -1]
}"#;
    let path = write_temp("bad_kahler.json", doc);
    let out = toric(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn checks_filter() {
    let out = toric(&[
        "example", "p1", "--", "verify", "--cutoff", "2", "--checks", "c1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("CHECK c1:"), "{text}");
    assert!(!text.contains("CHECK c2:"), "{text}");
    assert!(!text.contains("CHECK restriction:"), "{text}");
}

#[test]
fn golden_ifunction_outputs() {
    let cases: [(&str, &[&str]); 3] = [
        (
            "p1_cutoff3.txt",
            &["example", "p1", "--", "ifunction", "--cutoff", "3"],
        ),
        (
            "wp12_cutoff3.txt",
            &["example", "wp", "1", "2", "--", "ifunction", "--cutoff", "3"],
        ),
        (
            "football23_cutoff2.txt",
            &[
                "example", "football", "2", "3", "--", "ifunction", "--cutoff", "2",
            ],
        ),
    ];
    for (golden, args) in cases {
        let expect = std::fs::read(format!(
            "{}/tests/golden/{golden}",
            env!("CARGO_MANIFEST_DIR")
        ))
        .expect("golden file");
        let out = toric(args);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(out.stdout, expect, "golden mismatch for {golden}");
        // Byte identity across a second run and across worker counts.
        let again = toric(args);
        assert_eq!(out.stdout, again.stdout, "{golden} second run");
        let mut with_jobs: Vec<&str> = args.to_vec();
        with_jobs.push("--jobs");
        with_jobs.push("4");
        let parallel = toric(&with_jobs);
        assert_eq!(out.stdout, parallel.stdout, "{golden} --jobs 4");
    }
}

#[test]
fn mori_product() {
    let out = toric(&["example", "product", "p1", "p1", "--", "mori"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("MORI ray=(0,0,1,1)"), "{text}");
    assert!(text.contains("MORI ray=(1,1,0,0)"), "{text}");
    assert!(text.contains("TOTAL 2 rays"), "{text}");
}

#[test]
fn weights_output() {
    let out = toric(&["example", "wp", "1", "2", "--", "weights"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("WEIGHT sigma=0 i=0 u=(1)"), "{text}");
    assert!(text.contains("WEIGHT sigma=1 i=1 u=(-1/2)"), "{text}");
}

#[test]
fn gap_fan_not_convex() {
    let doc = r#"{
  "rank": 2,
  "rays": [[1, 0], [0, 1], [-1, 0], [0, -1]],
  "max_cones": [[0, 1], [2, 3]],
  "kahler": [1, 1, 1, 1]
}"#;
    let path = write_temp("gap.json", doc);
    let out = toric(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("support not convex"), "{}", stderr(&out));
    assert!(stderr(&out).contains("FAN INVALID"), "{}", stderr(&out));
}
