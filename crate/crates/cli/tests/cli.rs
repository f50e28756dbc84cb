use std::process::{Command, Output};

fn freefield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freefield")).args(args).env_remove("FREEFIELD_REPORT_DIR").output().expect("run freefield")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_examples() {
    let o = freefield(&["eval", "J", "3", "|lam>"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(x^4 - 1/2 x^2) |lam>\n");
    assert_eq!(stdout(&freefield(&["eval", "w", "1", "|0>"])), "0\n");
    assert_eq!(stdout(&freefield(&["eval", "a(-1)|0>", "1", "a(-1)|0>"])), "|0>\n");
    let o = freefield(&["eval", "J", "0", "h(-1/2)|tw>", "--convention", "weighted"]);
    assert_eq!(stdout(&o), "-45/128 h(-1/2) |tw>\n");
    let o = freefield(&["eval", "H", "0", "b1+(-1/2)|0>", "--rank", "2"]);
    assert_eq!(stdout(&o), "-b1+(-1/2) |0>\n");
}

#[test]
fn usage_errors_exit_two() {
    let o = freefield(&["eval", "J", "3", "h(-1/2)|0>"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sector mismatch"));
    assert_eq!(freefield(&["eval", "J", "3", "a(-1|0>"]).status.code(), Some(2));
    assert_eq!(freefield(&["verify", "nothing"]).status.code(), Some(2));
    assert_eq!(freefield(&["verify", "table1", "--budget", "nope=1"]).status.code(), Some(2));
    assert_eq!(freefield(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(freefield(&["char", "nothing"]).status.code(), Some(2));
}

#[test]
fn verify_table1_reports() {
    let o = freefield(&["verify", "table1", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["summary"]["pass"], 10);
    assert_eq!(v["conventions"]["charge_sign"], -1);
    assert!(v.get("timing_ms").is_none());

    let o = freefield(&["verify", "table1", "--format", "tsv"]);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("table1\t")).count(), 10);
}

#[test]
fn failing_suite_exits_one() {
    let o = freefield(&["verify", "appendix-b", "--budget", "appendix-b.max_rank=2", "--no-timing"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn report_directory_from_environment() {
    let dir = std::env::temp_dir().join(format!("freefield-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_freefield"))
        .args(["verify", "twisted", "--budget", "twisted.depth=2"])
        .env("FREEFIELD_REPORT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("twisted: "));
    let text = std::fs::read_to_string(dir.join("twisted.json")).unwrap();
    assert!(text.contains("\"twisted.depth\": 2"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn characters_and_ranks() {
    for m in ["plus", "minus", "twisted-plus", "lattice-half", "vir:2", "weyl:2", "fock:1/4"] {
        let o = freefield(&["char", m, "--order", "8"]);
        assert_eq!(o.status.code(), Some(0), "{m}");
        assert!(stdout(&o).contains(": true"), "{m}");
    }
    let o = freefield(&["c1-rank", "--module", "generic", "--depth", "4"]);
    assert!(stdout(&o).contains("exceptional: x^2 + 3/16"));
    let o = freefield(&["c1-rank", "--module", "twisted-minus", "--depth", "3/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("codimension: 2"), "{}", stdout(&o));
}
