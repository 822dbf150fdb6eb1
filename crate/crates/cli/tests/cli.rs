use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orddens")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn first_line(args: &[&str]) -> String {
    stdout(args).lines().next().unwrap_or_default().to_string()
}

#[test]
fn density_commands() {
    assert_eq!(first_line(&["density", "--field", "Q", "--group", "2", "--m", "2"]), "17/24 ≈ 0.708333");
    assert!(first_line(&["density", "--field", "Q", "--group", "16,27", "--m", "12"]).starts_with("95/1456 "));
    assert!(first_line(&["density", "--field", "Qzeta3", "--group", "16,27", "--m", "12"]).starts_with("95/728 "));
    assert!(first_line(&["density", "--field", "Q", "--group", "2", "--m", "1"]).starts_with("1 "));
    assert_eq!(first_line(&["kfree", "--field", "Qzeta3", "--group", "2", "--k", "2"]), "3/4 * A(2,1) ≈ 0.398");
    assert!(first_line(&["valuation", "--field", "Qsqrtm5", "--group", "2,3", "--k", "6", "--m", "6"]).starts_with("59/364 "));
    assert!(first_line(&["coprime", "--field", "Q", "--group", "2", "--k", "1"]).starts_with("1 "));
    // <2 zeta_4, zeta_4>: zeta_4 alone forces 4 | ord
    assert!(first_line(&["density", "--field", "Qzeta4", "--group", "2a", "--torsion", "4", "--m", "4"]).starts_with("1 "));
    let series = stdout(&["density", "--m", "2", "--series", "--bound", "32768"]);
    assert!(series.lines().nth(1).unwrap().starts_with("series [0.7083"), "{series}");
}

#[test]
fn paper_tables() {
    let text = stdout(&["paper-tables", "1"]);
    assert!(text.starts_with("table 1: 56 cells, 56 match"), "{text}");
    assert_eq!(text.lines().filter(|l| l.trim_end().ends_with(" ok")).count(), 56);
    let all = stdout(&["paper-tables", "all"]);
    let summaries: Vec<&str> = all.lines().filter(|l| l.starts_with("table ")).collect();
    assert_eq!(summaries.len(), 8);
    assert!(!all.contains("MISMATCH"));
    assert!(stdout(&["paper-tables", "5"]).contains("0.434934"));
    let bad = run(&["paper-tables", "9"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_commands() {
    let text = stdout(&["verify", "--field", "Q", "--group", "2", "--event", "div:2", "--x", "1e7"]);
    let dev: f64 = text.lines().nth(2).unwrap().split(' ').nth(1).unwrap().parse().unwrap();
    assert!(dev < 0.01, "{text}");
    let text = stdout(&["verify", "--event", "div:1"]);
    assert!(text.contains("deviation 0.000000 PASS"), "{text}");
    let text = stdout(&["verify", "--field", "Q", "--group", "2", "--event", "kummer:8,2", "--x", "1e6"]);
    assert!(text.starts_with("exact 1/4"), "{text}");
    let ratio: f64 = text.lines().nth(1).unwrap().rsplit(' ').next().unwrap().parse().unwrap();
    assert!((ratio - 0.25).abs() < 0.01);

    // an unmet tolerance is a failed check
    let out = run(&["verify", "--event", "div:2", "--x", "2000", "--tolerance", "1e-9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("check failed"));
    assert_eq!(run(&["verify", "--event", "div:2", "--x", "100"]).status.code(), Some(2));
    let out = run(&["verify", "--event", "prime:2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 1"));
}

#[test]
fn formats_encode_the_same_values() {
    let args = ["kfree", "--field", "Qzeta4", "--group", "2", "--k", "3", "--verify", "2e4", "--tolerance", "0.1"];
    let text = stdout(&args);
    let with = |f: &str| {
        let mut a = args.to_vec();
        a.extend(["--format", f]);
        stdout(&a)
    };
    let json: serde_json::Value = serde_json::from_str(&with("json")).unwrap();
    let obj = &json[0];
    let csv_text = with("csv");
    let mut csv = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = csv.headers().unwrap().clone();
    let row = csv.records().next().unwrap().unwrap();
    assert_eq!(headers.len(), obj.as_object().unwrap().len());
    for (h, v) in headers.iter().zip(row.iter()) {
        assert_eq!(obj[h].as_str(), Some(v), "{h}");
    }
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], format!("{} ≈ {}", obj["value"].as_str().unwrap(), obj["approx"].as_str().unwrap()));
    assert!(lines[1].contains(&format!(" {} {} {} ", obj["matched"].as_str().unwrap(), obj["total"].as_str().unwrap(), obj["excluded"].as_str().unwrap())));
    assert!(lines[1].ends_with(obj["ratio"].as_str().unwrap()));

    let json: serde_json::Value = serde_json::from_str(&stdout(&["density", "--m", "2", "--format", "json"])).unwrap();
    assert_eq!(json[0]["value"], "17/24");
    let rows = stdout(&["paper-tables", "8", "--format", "csv"]);
    assert_eq!(rows.lines().count(), 50);
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# Table 8 cell\nfield Qsqrtm5\ngroup 2,27,25\nk 6\nm 9\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert!(first_line(&["valuation", "--config", cfg]).starts_with("37/86400 "));
    // flags win over the file
    assert!(!first_line(&["valuation", "--config", cfg, "--m", "3"]).starts_with("37/86400 "));

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "field Q\n  colour blue\n").unwrap();
    let out = run(&["density", "--config", bad.to_str().unwrap(), "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 3"));
}

#[test]
fn degree_tables_and_custom_fields() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qi.deg");
    let p = path.to_str().unwrap();
    assert!(stdout(&["degree-table", "--field", "Qzeta4", "--group", "2", "--out", p]).starts_with("wrote "));
    let text = stdout(&["degree-table", "--group", "2"]);
    assert!(text.starts_with("field Q\ngenerators 2\n"));
    assert!(text.contains("deg 8 2 4\n"));
    // Q(i) given by x^2 + 1 and the saved table
    let custom = first_line(&["density", "--field-poly", "1,0,1", "--table", p, "--group", "2", "--m", "2"]);
    assert_eq!(custom, first_line(&["density", "--field", "Qzeta4", "--group", "2", "--m", "2"]));
    let out = run(&["density", "--field-poly", "1,0,1", "--table", p, "--group", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn errors_name_the_operation() {
    let out = run(&["density", "--group", "2,4", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("GroupSpec"));
    let out = run(&["kfree", "--k", "1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("beta_closed"));
    let out = run(&["density", "--field", "Qzeta3", "--group", "5", "--m", "2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no bundled degree table"));
    assert_eq!(run(&["density", "--field", "Qzeta7", "--m", "2"]).status.code(), Some(2));
}
