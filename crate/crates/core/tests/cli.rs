use std::process::{Command, Output};

fn hodge_verify(args: &[&str], env_seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hodge-verify"));
    cmd.args(args).env_remove("VERIFY_SEED");
    if let Some(s) = env_seed {
        cmd.env("VERIFY_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

const QUICK: &[&str] = &["--suite", "rank-locus", "--genus", "2", "--trials", "4"];

#[test]
fn passing_run_exits_zero() {
    let out = hodge_verify(QUICK, None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["passed"], true);
    assert_eq!(r["seed"], 42);
}

#[test]
fn failing_check_exits_one() {
    let out = hodge_verify(
        &["--suite", "curvature-fd", "--genus", "1", "--trials", "1", "--tol", "curvature=1e-300"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["passed"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["--suite", "no-such-suite"][..],
        &["--suite", "remark", "--genus", "0"],
        &["--suite", "remark", "--tol", "identity=-1"],
        &["--suite", "remark", "--tol", "bogus=1"],
        &["--suite", "remark", "--samples", "1"],
        &["--config", "/nonexistent/config.json"],
    ] {
        let out = hodge_verify(args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn unknown_config_field_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"suites": ["remark"], "genus_lst": [2]}"#).unwrap();
    let out = hodge_verify(&["--config", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("genus_lst"));
}

#[test]
fn seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"suites": ["rank-locus"], "genus_list": [2], "trials": 2, "seed": 5}"#).unwrap();
    let file = path.to_str().unwrap();
    assert_eq!(report(&hodge_verify(&["--config", file], Some("9")))["seed"], 5);
    assert_eq!(report(&hodge_verify(&["--config", file, "--seed", "3"], Some("9")))["seed"], 3);
    assert_eq!(report(&hodge_verify(QUICK, Some("9")))["seed"], 9);
    assert_eq!(hodge_verify(QUICK, Some("not-a-number")).status.code(), Some(2));
}

#[test]
fn parallel_matches_sequential() {
    let args = ["--suite", "rank-locus", "--suite", "slice-61", "--genus", "3", "--trials", "3", "--seed", "11"];
    let strip = |out: &Output| {
        let mut v = report(out);
        for s in v["suites"].as_array_mut().unwrap() {
            s.as_object_mut().unwrap().remove("wall_time_ms");
        }
        v["config"].as_object_mut().unwrap().remove("parallel");
        v
    };
    let seq = strip(&hodge_verify(&args, None));
    let mut par_args = args.to_vec();
    par_args.push("--parallel");
    assert_eq!(seq, strip(&hodge_verify(&par_args, None)));
}
