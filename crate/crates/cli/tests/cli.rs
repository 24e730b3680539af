use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use sqc_cli::parse_config;

fn sqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqc"))
        .args(args)
        .output()
        .expect("spawn sqc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV table, header first.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn column(table: &[Vec<String>], name: &str) -> Vec<String> {
    let idx = table[0]
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    table[1..].iter().map(|r| r[idx].clone()).collect()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn transport_sqc_flags() {
    let o = sqc(&[
        "transport-sqc",
        "--g",
        "1",
        "--d-over-x0",
        "10",
        "--P",
        "0.9",
        "--N",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = rows(&stdout(&o));
    assert_eq!(t.len(), 2);
    assert_eq!(column(&t, "N"), ["8"]);
    let f: f64 = column(&t, "fidelity")[0].parse().unwrap();
    assert!(f > 0.99 && f <= 1.0);
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# transport\ng = 1\nd-over-x0 = 10\nP = 0.9\nN = 4\n").unwrap();
    let out = dir.path().join("out.csv");
    let o = sqc(&[
        "transport-sqc",
        "--config",
        cfg.to_str().unwrap(),
        "--N",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    assert_eq!(column(&rows(&read(&out)), "N"), ["8"]);
}

#[test]
fn validation_errors_exit_one() {
    let o = sqc(&[
        "transport-sqc",
        "--g",
        "1",
        "--d-over-x0",
        "10",
        "--P",
        "1.5",
        "--N",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("P must be in (0,1]"));
    assert!(o.stdout.is_empty());

    let o = sqc(&["search-sqc", "--g", "1", "--P", "0.9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing required key N"));

    let o = sqc(&["search-sqc", "--g", "1e", "--P", "0.9", "--N", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("malformed number for key g"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "g = 1\nspeed = 3\n").unwrap();
    let o = sqc(&["search-sqc", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown key 'speed'"));

    let o = sqc(&["search-sqc", "--speed", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn numerical_errors_exit_two() {
    let o = sqc(&[
        "transport-sqc",
        "--setting",
        "iii",
        "--P",
        "0.9",
        "--N",
        "8",
        "--method",
        "grid",
        "--grid-min",
        "-8",
        "--grid-max",
        "10",
        "--grid-points",
        "1024",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grid boundary"));

    let o = sqc(&["ms-check", "--nmax", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("truncation"));
}

#[test]
fn help_exits_zero() {
    let o = sqc(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reproduce"));
}

#[test]
fn fig1b_preset() {
    let dir = tempfile::tempdir().unwrap();
    let o = sqc(&["reproduce", "fig1b", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = rows(&read(&dir.path().join("fig1b.csv")));
    assert_eq!(t.len(), 2);
    let f: f64 = column(&t, "fidelity")[0].parse().unwrap();
    assert!((f - 0.995).abs() <= 0.005, "F = {f}");
    let t_total: f64 = column(&t, "T")[0].parse().unwrap();
    assert!((t_total - 6.830).abs() < 1e-3);

    let mut lens = Vec::new();
    for name in ["fig1b_initial", "fig1b_single_shot", "fig1b_sqc"] {
        let w = rows(&read(&dir.path().join(format!("{name}.csv"))));
        assert_eq!(w[0], ["x", "re", "im", "abs2"]);
        let dx: f64 = w[2][0].parse::<f64>().unwrap() - w[1][0].parse::<f64>().unwrap();
        let norm: f64 = w[1..].iter().map(|r| r[3].parse::<f64>().unwrap()).sum::<f64>() * dx;
        assert!((norm - 1.0).abs() < 1e-9, "{name} norm {norm}");
        lens.push(w.len());
    }
    assert!(lens.windows(2).all(|p| p[0] == p[1]));
}

#[test]
fn reproduce_without_out_streams_primary_table() {
    let o = sqc(&["reproduce", "fig1b"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&stdout(&o)).len(), 2);
    assert!(stderr(&o).contains("fig1b_sqc.csv"));
}

#[test]
fn fig1c_is_deterministic_across_job_counts() {
    let a = sqc(&["reproduce", "fig1c", "--jobs", "1"]);
    let b = sqc(&["reproduce", "fig1c", "--jobs", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let t = rows(&stdout(&a));
    assert_eq!(t.len(), 1 + 3 * 16);
    assert_eq!(column(&t, "setting")[16], "ii");
}

#[test]
fn fig2c_equalized_cost() {
    let o = sqc(&["reproduce", "fig2c", "--N", "1,8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = rows(&stdout(&o));
    assert_eq!(
        column(&t, "protocol"),
        ["sqc", "sqc", "aqc-type-I", "aqc-type-I", "aqc-type-II", "aqc-type-II"]
    );
    for c in column(&t, "cost") {
        assert!((c.parse::<f64>().unwrap() - 2.0).abs() < 1e-6);
    }
    let f: Vec<f64> = column(&t, "fidelity").iter().map(|s| s.parse().unwrap()).collect();
    assert!(f[1] > f[3] && f[1] > f[5]);
}

#[test]
fn figs1_has_both_families() {
    let o = sqc(&["reproduce", "figS1"]);
    assert_eq!(o.status.code(), Some(0));
    let t = rows(&stdout(&o));
    let kinds = column(&t, "kind");
    assert_eq!(kinds.iter().filter(|k| *k == "sigma-x").count(), 600);
    assert_eq!(kinds.iter().filter(|k| *k == "eigen").count(), 600);
}

#[test]
fn fig3a_reduced_has_raw_and_penalized() {
    let o = sqc(&["reproduce", "fig3a", "--setting", "i", "--N", "1,2", "--dt", "0.01"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = rows(&stdout(&o));
    let raw: Vec<f64> = column(&t, "fidelity_raw").iter().map(|s| s.parse().unwrap()).collect();
    let pen: Vec<f64> = column(&t, "fidelity_penalized")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(raw.len(), 2);
    for (k, (r, p)) in raw.iter().zip(&pen).enumerate() {
        let expected = r * 0.995f64.powi(k as i32 + 1);
        assert!((p - expected).abs() < 1e-12);
    }
}

#[test]
fn preset_rejects_foreign_keys() {
    let o = sqc(&["reproduce", "figS1", "--N", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("figS1 does not take key N"));
}

const KEYS: [&str; 5] = ["g", "P", "N", "gamma", "p-error"];

proptest! {
    #[test]
    fn manifest_round_trip(
        values in proptest::collection::vec(proptest::option::of("[0-9][0-9.,]{0,6}"), KEYS.len()),
        out in proptest::option::of("[a-z]{1,8}\\.csv"),
    ) {
        let mut args = vec!["open-search".to_string()];
        for (k, v) in KEYS.iter().zip(&values) {
            if let Some(v) = v {
                args.push(format!("--{k}"));
                args.push(v.clone());
            }
        }
        if let Some(o) = &out {
            args.push("--out".into());
            args.push(o.clone());
        }
        let m = parse_config(&args, None).unwrap();
        prop_assert_eq!(&parse_config(m.to_args(), None).unwrap(), &m);
        let from_file = parse_config([m.command.name()], Some(&m.to_config_text())).unwrap();
        prop_assert_eq!(from_file, m);
    }
}
