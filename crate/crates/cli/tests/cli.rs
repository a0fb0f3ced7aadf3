use std::process::{Command, Output};

fn hecke(line: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(line.split_whitespace())
        .env_remove("HECKE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_suites_pass() {
    for args in [
        "verify relations --r 3 --n 2 --k 1,1 --kbar0 1",
        "verify realization --r 2 --n 3 --kbar0 1/2",
        "verify pbw --r 4 --n 2 --fuzz 15 --seed 7",
        "verify center --r 2 --n 3",
        "verify duality --r 3 --n 2 --fuzz 3",
    ] {
        let out = hecke(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let checks = json["report"].as_array().unwrap();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c["passed"] == true));
    }
}

#[test]
fn header_echoes_parameters_verbatim() {
    let out = hecke("verify relations --r 3 --n 2 --k 1/2,z+1 --kbar0 2/3");
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let h = &json["header"];
    assert_eq!(h["k"], "1/2,z+1");
    assert_eq!(h["kbar0"], "2/3");
    assert_eq!(h["suite"], "relations");
    assert_eq!(h["r"], "3");
}

#[test]
fn sweep_summary_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = hecke(&format!(
        "sweep --r 2 --n 2 --kbar0 1 --nu-grid -3..3 --out {}",
        path.display()
    ));
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "196 instances, 196 agree, 0 disagree, 0 refused");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["report"]["rows"].as_array().unwrap().len(), 196);
    assert_eq!(json["report"]["summary"]["disagree"], 0);
}

#[test]
fn sweep_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = hecke(&format!(
        "sweep --r 3 --kbar0 1/2 --nu-grid -1..1 --nu-step 1/2 --varpi 0,0;1,2 --format csv --out {}",
        path.display()
    ));
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "nu,varpi,kbar0,criterion,oracle,factors");
    assert_eq!(body.len(), 1 + 2 * 25);
    assert!(text.contains("# nu_step=1/2"));
    let reducible = body.iter().filter(|l| l.contains(",reducible,reducible,")).count();
    assert!(reducible > 0);
}

#[test]
fn output_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, name: &str| {
        let path = dir.path().join(name);
        let out = hecke(&format!(
            "sweep --r 2 --n 3 --nu-grid -1..1 --format csv --jobs {} --out {}",
            jobs,
            path.display()
        ));
        assert_eq!(code(&out), 0);
        std::fs::read(path).unwrap()
    };
    let a = run("1", "a.csv");
    let b = run("4", "b.csv");
    assert_eq!(a, b);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["verify", "center", "--n", "2"])
        .env("HECKE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(out.stdout.starts_with(b"center:"));
    assert!(dir.path().join("verify-center.json").exists());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        "sweep --kbar0 0.5",
        "verify relations --r 3 --k 1",
        "verify nonsense",
        "criterion --nu 1 --varpi 0,0",
        "criterion --nu 1,2 --varpi 0,5",
        "sweep --nu-grid 3..1",
        "module --nu 1,2 --varpi 0,0 --twist 1,2,3",
    ] {
        assert_eq!(code(&hecke(args)), 2, "{args:?}");
    }
}

#[test]
fn oversized_sweep_is_refused() {
    let out = hecke("sweep --n 4 --bound 12");
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bound"));
}

#[test]
fn criterion_report() {
    let out = hecke("criterion --r 2 --n 2 --nu 2,0 --varpi 0,0 --oracle");
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["report"]["criterion"]["verdict"], "reducible");
    assert_eq!(json["report"]["criterion"]["p_set"][0], serde_json::json!([0, 1]));
    assert_eq!(json["report"]["oracle"]["verdict"], "reducible");

    let out = hecke("criterion --r 3 --n 2 --nu 1,-1/2 --varpi 1,1 --kbar0 1/2");
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["report"]["criterion"]["verdict"], "reducible");
}

#[test]
fn module_dump() {
    let out = hecke("module --r 3 --n 2 --nu 1,z --varpi 0,2 --twist 2,1 --dual");
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let m = &json["report"];
    assert_eq!(m["dim"], 2);
    let names: Vec<&str> = m["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["D1", "D2", "theta1", "theta2", "s1"]);
    assert_eq!(json["header"]["twist"], "2,1");
}
