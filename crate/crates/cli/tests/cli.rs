use std::path::PathBuf;
use std::process::{Command, Output};

const TOY6: &str = "color,A,class\nr,1.0,+\nr,2.0,+\nb,3.0,+\nb,4.0,-\nr,5.0,-\nb,2.2,-\n";

fn hypat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypat")).args(args).output().expect("binary runs")
}

fn toy6_file(dir: &tempfile::TempDir) -> PathBuf {
    let p = dir.path().join("toy6.csv");
    std::fs::write(&p, TOY6).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn mine_tsv_golden() {
    let dir = tempfile::tempdir().unwrap();
    let input = toy6_file(&dir);
    let o = hypat(&["mine", "--input", input.to_str().unwrap(), "--target-class", "+", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "+\t0.750\t1.000\t0.857\t{A<3.5}\n");
}

#[test]
fn search_flags_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = toy6_file(&dir);
    let base = ["mine", "--input", input.to_str().unwrap(), "--format", "tsv"];
    let reference = stdout(&hypat(&base));
    for flag in [&["--no-bnb"][..], &["--no-reorder"], &["--no-merge"], &["--threads", "4"]] {
        let args: Vec<&str> = base.iter().chain(flag).copied().collect();
        assert_eq!(stdout(&hypat(&args)), reference, "{flag:?}");
    }
}

#[test]
fn output_file_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = toy6_file(&dir);
    let out = dir.path().join("report.json");
    let o = hypat(&[
        "mine",
        "--input",
        input.to_str().unwrap(),
        "--target-class",
        "+",
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let json = std::fs::read_to_string(out).unwrap();
    assert!(json.contains("\"{A<3.5}\""), "{json}");
}

#[test]
fn dump_cuts_goes_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let input = toy6_file(&dir);
    let o = hypat(&["mine", "--input", input.to_str().unwrap(), "--target-class", "+", "--format", "tsv", "--dump-cuts"]);
    assert_eq!(stdout(&o), "+\t0.750\t1.000\t0.857\t{A<3.5}\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("A\t2.1,2.6,3.5"));
}

#[test]
fn cuts_command() {
    let dir = tempfile::tempdir().unwrap();
    let input = toy6_file(&dir);
    let o = hypat(&["cuts", "--input", input.to_str().unwrap(), "--target-class", "+"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "A\t2.1,2.6,3.5\n");
}

#[test]
fn verify_generated_and_file() {
    let o = hypat(&["verify", "--count", "40"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "40 instances: miner equals oracle\n");

    let dir = tempfile::tempdir().unwrap();
    let input = toy6_file(&dir);
    let o = hypat(&["verify", "--input", input.to_str().unwrap(), "--measure", "chi2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let o = hypat(&["mine", "--input", "/nonexistent/data.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/data.csv"));

    let dir = tempfile::tempdir().unwrap();
    let input = toy6_file(&dir);
    let o = hypat(&["mine", "--input", input.to_str().unwrap(), "--target-class", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hypat(&["mine", "--input", input.to_str().unwrap(), "--epsilon", "abc"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn time_limit_truncates_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = toy6_file(&dir);
    let o = hypat(&["mine", "--input", input.to_str().unwrap(), "--time-limit", "0", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(3));
}
