use std::process::Command;

fn gymv(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gymv")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = gymv(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn list_shows_every_env() {
    let out = ok(&["list"]);
    assert!(out.contains("17 environments"));
    assert_eq!(ok(&["list", "--json"]), gymv::catalog::SHIPPED);
}

#[test]
fn render_writes_the_golden_png() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.png");
    ok(&[
        "render",
        "n_queens",
        "--level",
        "1",
        "--seed",
        "0",
        "--out",
        p.to_str().unwrap(),
    ]);
    let reg = gymv_core::Registry::builtin();
    assert_eq!(
        std::fs::read(&p).unwrap(),
        gymv::golden::render_png(&reg, "n_queens", 1, 0).unwrap()
    );
}

#[test]
fn eval_then_verify_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let batch = dir.path().join("batch.jsonl");
    let (r, b) = (report.to_str().unwrap(), batch.to_str().unwrap());
    ok(&[
        "eval",
        "--env",
        "tictactoe",
        "--env",
        "grid_bfs",
        "--levels",
        "0,2",
        "--seeds",
        "3",
        "--k",
        "2",
        "--agent",
        "random",
        "--report",
        r,
        "--batch",
        b,
    ]);
    assert!(ok(&["verify-report", "--report", r, "--batch", b]).contains("report verified"));

    let mut rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let old = rep["envs"][0]["mean_at_k"].as_f64().unwrap();
    rep["envs"][0]["mean_at_k"] = (old + 0.25).into();
    std::fs::write(&report, rep.to_string()).unwrap();
    let out = gymv(&["verify-report", "--report", r, "--batch", b]);
    assert!(!out.status.success());
}

#[test]
fn sweep_prints_csv_and_ratio() {
    let out = gymv(&["sweep", "n_queens", "--agent", "oracle", "--seeds", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = gymv::reports::read_sweep_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.acc == 1.0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho = 1.00"));
}

#[test]
fn play_and_transfer() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ep.jsonl");
    ok(&[
        "play",
        "tictactoe",
        "--agent",
        "oracle",
        "--history",
        "2",
        "--rules",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(gymv::episodes::read_batch(&out).unwrap().len(), 1);

    let input = dir.path().join("t.json");
    std::fs::write(
        &input,
        r#"{"sources":["a"],"targets":["a","b"],"baseline":{"a":1.0,"b":2.0},"cells":{"a":{"a":3.0,"b":1.0}}}"#,
    )
    .unwrap();
    let text = ok(&["transfer", input.to_str().unwrap()]);
    assert!(text.contains("+2.0 -1.0"), "{text}");
}
