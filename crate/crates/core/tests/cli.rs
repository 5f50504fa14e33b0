use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantorlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// CSV body lines: no comments, header first.
fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn constants_table() {
    let o = run(&["constants"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# cantorlab "));
    assert!(text.contains("# command: constants"));
    let c: f64 = body(&text)
        .iter()
        .find_map(|l| l.strip_prefix("c,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((c - (8.0f64 / 3.0).ln() / 16f64.ln()).abs() < 1e-15);
}

#[test]
fn norms_report_closed_forms() {
    let o = run(&["norms", "--K", "0..6", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = body(&text);
    let header: Vec<&str> = rows[0].split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    assert_eq!(rows.len(), 8);
    for (k, row) in rows[1..].iter().enumerate() {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[col("K")], k.to_string());
        assert_eq!(f[col("closed_form_match")], "true");
    }
    assert!(rows[2].contains("3/8"));
}

#[test]
fn norms_without_closed_form_still_succeed() {
    let o = run(&["norms", "--K", "2..2", "--p", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = body(&text)[1].to_string();
    assert!(row.contains("level_product") || row.contains("false"), "{row}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["norms", "--K", "20..20", "--p", "3"]).status.code(), Some(2));
    assert_eq!(run(&["norms", "--K", "3..1"]).status.code(), Some(1));
    assert_eq!(run(&["furstenberg", "--alpha", "0.999"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "pest1", "--K", "x"]).status.code(), Some(1));
    assert_eq!(run(&["project", "--x", "3/2"]).status.code(), Some(1));
    assert_eq!(run(&["constants", "--jobs", "0"]).status.code(), Some(1));
    let o = run(&["sumset", "--t", "1/0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_output_parses() {
    let o = run(&["--format", "json", "verify", "est2", "--K", "1..3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tool"], "cantorlab");
    assert_eq!(v["command"], "verify");
    assert!(v["config"].get("jobs").is_none());
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["K"], 1);
}

#[test]
fn verify_csv_columns() {
    let o = run(&["verify", "pk-dlambda", "--K", "0..3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = body(&text);
    assert_eq!(rows[0], "estimate,K,lhs,envelope,ratio,method,error_bound");
    let lhs: f64 = rows[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((lhs - 1.0).abs() < 1e-12);
    let lhs: f64 = rows[4].split(',').nth(2).unwrap().parse().unwrap();
    assert!((lhs - 0.125).abs() < 1e-11);
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("cantorlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("boxdim.csv");
    let a = run(&["boxdim", "cantor", "--depth", "8"]);
    let b = run(&["--out", path.to_str().unwrap(), "boxdim", "cantor", "--depth", "8"]);
    assert_eq!(b.status.code(), Some(0));
    assert!(b.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    let svg = dir.join("profile.svg");
    let o = run(&["profile", "--depth", "5", "--grid", "5", "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sumset_reports_gap() {
    let o = run(&["sumset", "--t", "1/2", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("max_gap"), "{text}");
    assert!(text.contains("3/512"));
}

#[test]
fn output_is_independent_of_jobs() {
    let cases: &[&[&str]] = &[
        &["verify", "est2", "--K", "1..6"],
        &["verify", "pest1", "--K", "1..6"],
        &["verify", "mainest2", "--K", "1..3", "--measure", "lebesgue"],
        &["profile", "--depth", "6", "--grid", "9"],
        &["boxdim", "sumset", "--depth", "6", "--t", "1/3"],
        &["norms", "--K", "0..5", "--p", "3"],
    ];
    for case in cases {
        let mut one = vec!["--jobs", "1"];
        one.extend_from_slice(case);
        let mut four = vec!["--jobs", "4"];
        four.extend_from_slice(case);
        let a = run(&one);
        let b = run(&four);
        assert_eq!(a.status.code(), Some(0), "{case:?}");
        assert_eq!(a.stdout, b.stdout, "{case:?}");
    }
}
