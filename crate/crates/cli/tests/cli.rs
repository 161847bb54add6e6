use std::process::{Command, Output};

const A1: &str = "0^2 -1 1 -2 2 -4 4 -7^2 7^2";
const A2: &str = "-1 1 -2 2 -3 3 -4 4 -5 5 -8 8";

fn ksumlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksumlab")).args(args).output().unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = ksumlab(args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn ksums_examples() {
    assert_eq!(run(&["ksums", "-1 0^10 1", "-k", "4"]), (0, "-1^120 0^255 1^120\n".into()));
    assert_eq!(run(&["ksums", "1 2 3", "-k", "2"]), (0, "3 4 5\n".into()));
    assert_eq!(run(&["ksums", "1 2 3", "-k", "5"]).0, 2);
    assert_eq!(run(&["ksums", "1 x 3", "-k", "2"]).0, 2);
}

#[test]
fn ksums_output_round_trips() {
    let (_, once) = run(&["ksums", "1/2 1/2 -3 4", "-k", "2"]);
    let (_, twice) = run(&["ksums", once.trim(), "-k", "1"]);
    assert_eq!(once, twice);
}

#[test]
fn collide_examples() {
    assert_eq!(run(&["collide", A1, A2, "-k", "4"]), (0, "EQUAL (495 sums)\n".into()));
    let changed = "0^2 -1 1 -2 2 -4 4 -7^2 7 6";
    assert_eq!(run(&["collide", changed, A2, "-k", "4"]).0, 1);
    assert_eq!(run(&["collide", "1 2", "1 2 3", "-k", "1"]).0, 2);
}

#[test]
fn sets_can_come_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.txt");
    std::fs::write(&path, format!("# the (12, 4) pair\n{A1}\n{A2}\n")).unwrap();
    let path = path.to_str().unwrap();
    assert_eq!(run(&["collide", path, "-k", "4"]).0, 0);
    let (code, text) = run(&["ksums", path, "-k", "4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], lines[1]);
}

#[test]
fn expand_examples() {
    assert_eq!(run(&["expand", "2", "--s1zero"]), (0, "E2 = 120*S2\n".into()));
    assert_eq!(run(&["expand", "3", "-k", "4", "-n", "12", "--s1zero"]), (0, "E3 = 48*S3\n".into()));
    let (code, text) = run(&["expand", "6", "--check-paper"]);
    assert_eq!(code, 0);
    assert!(text.lines().any(|l| l == "coef(S6) = 0 [expected 0] OK"));
    assert_eq!(run(&["expand", "0"]).0, 2);
    assert_eq!(run(&["expand", "13", "--check-paper"]).0, 2);
}

#[test]
fn check_paper_honours_fixture_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "E2 = 121*S2\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ksumlab"))
        .args(["expand", "2", "--check-paper"])
        .env("KSUMLAB_FIXTURES", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "coef(S2) = 120 [expected 121] MISMATCH\n");
}

#[test]
fn generated_fixture_matches_expand_all() {
    let (code, text) = run(&["expand", "--all"]);
    assert_eq!(code, 0);
    assert_eq!(text, ksumlab::symfunc::fixture::GENERATED_IDENTITIES);
}

#[test]
fn eliminate_examples() {
    let (code, text) = run(&["eliminate", "--verify-coefficients"]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("coef(S6^2*E2) = 73458/5465"));

    assert_eq!(run(&["eliminate", "--example1"]), (0, "roots: 2, 377762/44361\n".into()));

    let (code, text) = run(&["eliminate", "--residuals", A1]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().count(), 13);
    assert!(text.lines().all(|l| l.ends_with(": 0")));
    assert_eq!(run(&["eliminate", "--residuals", "1 2 3 4 5 6 7 8 9 10 11 20"]).0, 1);

    assert_eq!(run(&["eliminate", "--second-root", A2]), (0, "S6' = 565318\nS6'' = 478918\n".into()));
    // Shifted input is centred first.
    let shifted = "3^2 2 4 1 5 -1 7 -4^2 10^2";
    let out = ksumlab(&["eliminate", "--second-root", shifted]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("shifted by -3"));
    assert_eq!(run(&["eliminate", "--second-root", "0^12"]).0, 2);
    assert_eq!(run(&["eliminate", "--second-root", "1 2 3"]).0, 2);
    assert_eq!(run(&["eliminate"]).0, 2);
}

#[test]
fn search_examples() {
    let (code, text) = run(&["search", "12", "4", "--bound", "8", "--symmetric"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    let record: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(record["k"], 4);
    assert_eq!(record["first"], serde_json::json!([-8, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 8]));
    assert_eq!(record["second"], serde_json::json!([-7, -7, -4, -2, -1, 0, 0, 1, 2, 4, 7, 7]));

    let (code, text) = run(&["search", "4", "2", "--bound", "7"]);
    assert_eq!(code, 0);
    assert!(text.lines().any(|l| l.contains(r#""first":[-7,-1,3,5]"#) && l.contains(r#""second":[-5,-3,1,7]"#)));

    assert_eq!(run(&["search", "3", "2", "--bound", "4"]), (1, String::new()));
    assert_eq!(run(&["search", "5", "6", "--bound", "4"]).0, 2);
}

#[test]
fn search_resume_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("ckpt");
    let out = dir.path().join("out.jsonl");
    let args = |workers: &'static str| {
        vec![
            "search".to_string(), "12".into(), "4".into(), "-b".into(), "8".into(), "--symmetric".into(),
            "-w".into(), workers.into(), "--resume".into(), ckpt.to_str().unwrap().into(),
            "--out".into(), out.to_str().unwrap().into(),
        ]
    };
    let first = Command::new(env!("CARGO_BIN_EXE_ksumlab")).args(args("1")).output().unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert!(first.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    let again = Command::new(env!("CARGO_BIN_EXE_ksumlab")).args(args("4")).output().unwrap();
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), written);
}
