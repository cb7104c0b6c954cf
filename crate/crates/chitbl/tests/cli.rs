use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chitbl::core::chebkit::adaptive_expand;
use chitbl::core::chitab::{encode_table, ChiTable, TablePanel};
use chitbl::core::tablegen::{GammaPanel, NodeExpansionSet, K, SIGMA_MAX};

/// A two-panel table whose node models are low-degree polynomials.
fn synthetic_table() -> ChiTable {
    let panels = (1..=2)
        .map(|l| {
            let p = GammaPanel::new(l).unwrap();
            let nodes = p
                .gamma_nodes
                .iter()
                .map(|&g| {
                    let m = |f: &dyn Fn(f64) -> f64| adaptive_expand(f, 0.0, SIGMA_MAX, K).unwrap();
                    NodeExpansionSet {
                        gamma: g,
                        chi_model: m(&|s| g * (1.0 + 2.0 * g * s)),
                        d1_model: m(&|s| 1.0 + s),
                        d2_model: m(&|_| 0.0),
                        d3_model: m(&|s| s - 2.0),
                    }
                })
                .collect();
            TablePanel::new(l, p.a, p.b, nodes).unwrap()
        })
        .collect();
    ChiTable::new(panels).unwrap()
}

struct Fixture {
    dir: tempfile::TempDir,
    table: PathBuf,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("synthetic.bin");
    std::fs::write(&table, encode_table(&synthetic_table())).unwrap();
    Fixture { dir, table }
}

fn chitbl(args: &[&str], table_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chitbl"));
    cmd.args(args).env_remove("CHITBL_PATH");
    if let Some(p) = table_env {
        cmd.env("CHITBL_PATH", p);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_seventeen_digits() {
    let f = fixture();
    let t = f.table.to_str().unwrap();
    let o = chitbl(&["eval", "--table", t, "--gamma", "100", "--sigma", "0.5"], None);
    assert_eq!(code(&o), 0, "{o:?}");
    let line = stdout(&o);
    let v: f64 = line.trim().strip_prefix("chi").unwrap().trim().parse().unwrap();
    assert!((v - 100.0 * (1.0 + 2.0 * 100.0 * 0.5)).abs() <= 1e-12 * v);
    let mantissa = line.trim().strip_prefix("chi").unwrap().trim().split('e').next().unwrap();
    assert_eq!(mantissa.len(), 18, "{line}");

    let o = chitbl(&["eval", "--table", t, "--gamma", "100", "--n", "50", "--derivs"], None);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 4);
    let psi1: f64 = s.lines().nth(1).unwrap().strip_prefix("psi1").unwrap().trim().parse().unwrap();
    assert!((psi1 - 150.0).abs() <= 1e-12 * 150.0, "{s}");
}

#[test]
fn table_path_comes_from_the_environment() {
    let f = fixture();
    let o = chitbl(&["eval", "--gamma", "300", "--n", "3"], Some(&f.table));
    assert_eq!(code(&o), 0, "{o:?}");
    let o = chitbl(&["eval", "--gamma", "300", "--n", "3"], None);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("CHITBL_PATH"));
}

#[test]
fn usage_errors_exit_2() {
    let f = fixture();
    let t = f.table.to_str().unwrap();
    for args in [
        vec!["eval", "--table", t, "--gamma", "100"],
        vec!["eval", "--table", t, "--gamma", "100", "--n", "3", "--sigma", "0.1"],
        vec!["eval", "--table", t, "--gamma", "x", "--n", "3"],
        vec!["build", "--lmin", "3", "--lmax", "2"],
        vec!["build", "--lmax", "8"],
        vec!["build", "--lmin", "0"],
        vec!["frobnicate"],
        vec![],
    ] {
        assert_eq!(code(&chitbl(&args, None)), 2, "{args:?}");
    }
}

#[test]
fn out_of_range_queries_exit_3() {
    let f = fixture();
    let t = f.table.to_str().unwrap();
    for args in [
        vec!["eval", "--table", t, "--gamma", "50", "--n", "3"],
        vec!["eval", "--table", t, "--gamma", "2000", "--sigma", "0.5"],
        vec!["eval", "--table", t, "--gamma", "100", "--sigma", "1.2"],
        vec!["eval", "--table", t, "--gamma", "100", "--sigma", "-0.1"],
        vec!["eval", "--table", t, "--gamma", "100", "--n", "111"],
    ] {
        assert_eq!(code(&chitbl(&args, None)), 3, "{args:?}");
    }
    assert_eq!(code(&chitbl(&["eval", "--table", t, "--gamma", "100", "--n", "110"], None)), 0);
}

#[test]
fn failed_verification_exits_4() {
    let f = fixture();
    let t = f.table.to_str().unwrap();
    let o = chitbl(&["verify", "--table", t, "--samples", "1", "--xi-samples", "0"], None);
    assert_eq!(code(&o), 4, "{o:?}");
    assert!(stdout(&o).contains("FAIL"));
    let again = chitbl(&["verify", "--table", t, "--samples", "1", "--xi-samples", "0"], None);
    assert_eq!(stdout(&again), stdout(&o));
    let other = chitbl(&["verify", "--table", t, "--samples", "1", "--xi-samples", "0", "--seed", "7"], None);
    assert_ne!(stdout(&other), stdout(&o));
}

#[test]
fn unreadable_or_malformed_tables_exit_5() {
    let f = fixture();
    let missing = f.dir.path().join("missing.bin");
    let o = chitbl(&["eval", "--table", missing.to_str().unwrap(), "--gamma", "100", "--n", "3"], None);
    assert_eq!(code(&o), 5);

    let bytes = std::fs::read(&f.table).unwrap();
    let cases: [(&str, Vec<u8>); 3] = [
        ("truncated.bin", bytes[..bytes.len() / 2].to_vec()),
        ("magic.bin", [b"CHITBL02".as_slice(), &bytes[8..]].concat()),
        ("trailing.bin", [bytes.as_slice(), &[0]].concat()),
    ];
    for (name, content) in cases {
        let p = f.dir.path().join(name);
        std::fs::write(&p, content).unwrap();
        let o = chitbl(&["eval", "--table", p.to_str().unwrap(), "--gamma", "100", "--n", "3"], None);
        assert_eq!(code(&o), 5, "{name}");
    }
}

#[test]
fn bench_reports_every_cell() {
    let f = fixture();
    let t = f.table.to_str().unwrap();
    let csv = f.dir.path().join("bench.csv");
    let o = chitbl(&["bench", "--table", t, "--reps", "2", "--samples", "5", "--csv", csv.to_str().unwrap()], None);
    assert_eq!(code(&o), 0, "{o:?}");
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + 2 * 4);
    for row in rows.lines().skip(1) {
        // every query timed exactly --reps times
        assert_eq!(row.split(',').nth(4).unwrap(), "10", "{row}");
    }
}
