use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magic-switch"))
        .args(args)
        .env_remove("MAGIC_SWITCH_JOBS")
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn fig2_csv_has_header_and_one_row_per_point() {
    let text = stdout(&["fig2", "--grid", "0.3:0.35:0.01"]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,channel_robustness,channel_robustness_status,rom_plus,rom_plus_status,rom_minus,rom_minus_status,\
         prob_plus,prob_plus_status,prob_minus,prob_minus_status"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0].starts_with("0.3,1,ok,"));
}

#[test]
fn sweeps_are_deterministic_across_job_counts() {
    let one = stdout(&["fig3", "--grid", "0:0.45:0.05", "--jobs", "1"]);
    let four = stdout(&["fig3", "--grid", "0:0.45:0.05", "--jobs", "4"]);
    assert_eq!(one, four);
}

#[test]
fn json_output_parses() {
    let text = stdout(&["figs1", "--grid", "0.5:0.6:0.05", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value.as_array().unwrap().len(), 3);
}

#[test]
fn appendix_c_reports_negative_gaps() {
    let text = stdout(&["appendix-c", "--grid", "0.5:1:0.25"]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "d,points,max_gap,argmax_p,max_identity_residual"
    );
    for line in lines {
        let gap: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(gap < 0.0);
    }
}

#[test]
fn rom_of_t_state() {
    let text = stdout(&["rom", "--state", "t-state"]);
    let row = text.lines().nth(1).unwrap();
    let value: f64 = row.split(',').next().unwrap().parse().unwrap();
    assert!((value - std::f64::consts::SQRT_2).abs() < 1e-9);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("magic-switch-cli-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let out = run(&["fig2", "--grid", "0.1:0.2:0.05", "--out", p]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn invalid_grid_is_rejected() {
    let out = run(&["fig2", "--grid", "0.8:0.2:0.1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid"));
}
