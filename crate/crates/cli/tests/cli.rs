use std::process::{Command, Output};

use heun_connect::wire::{ConnectReport, VerifyReport};
use heun_core::connection::{default_matrix, q1, ConnectionMatrix, MatrixKind};
use heun_core::heun_series::SubclassParams;
use heun_core::Complex64;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heun-connect")).args(args).output().unwrap()
}

fn bin_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heun-connect"))
        .env("HEUN_CONNECT_THREADS", threads)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("stdout is UTF-8")
}

#[test]
fn connect_json_round_trips_bit_exactly() {
    let args = ["connect", "--format", "json", "--alpha", "0.3,0.2", "--beta", "0.7,-0.1", "--gamma", "1.1,0.05"];
    let o = bin(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let report: ConnectReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&report).unwrap(), text.trim_end());

    let s = SubclassParams::new(Complex64::new(0.3, 0.2), Complex64::new(0.7, -0.1), Complex64::new(1.1, 0.05));
    for (dto, kind) in report.matrices.iter().zip(MatrixKind::ALL) {
        let parsed = ConnectionMatrix::try_from(dto).unwrap();
        let direct = default_matrix(kind, &s).unwrap();
        assert_eq!(parsed.branch_tag, direct.branch_tag);
        for (a, b) in parsed.entries.iter().flatten().zip(direct.entries.iter().flatten()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}

#[test]
fn connect_c11_is_q1() {
    let o = bin(&["connect", "--alpha", "0.5", "--beta", "0.8", "--gamma", "0.9"]);
    let report: ConnectReport = serde_json::from_str(&stdout(&o)).unwrap();
    let c11 = report.pair.unwrap().c11;
    let expected = q1(Complex64::new(0.5, 0.0), Complex64::new(0.8, 0.0), Complex64::new(0.9, 0.0)).unwrap();
    assert_eq!(c11[0].to_bits(), expected.re.to_bits());
    assert_eq!(c11[1].to_bits(), expected.im.to_bits());
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["connect", "--bogus"]).status.code(), Some(1));
    assert_eq!(bin(&["connect", "--alpha", "x"]).status.code(), Some(1));
    assert_eq!(bin(&[]).status.code(), Some(1));
    assert_eq!(bin(&["eval", "--tol", "-1"]).status.code(), Some(1));
    assert_eq!(bin(&["connect", "--matrix", "sideways"]).status.code(), Some(1));
    assert_eq!(bin(&["connect", "--gamma", "2"]).status.code(), Some(2));
    assert_eq!(bin(&["eval", "--gamma", "-1"]).status.code(), Some(2));
    assert_eq!(bin(&["eval", "--path", "0.3;0.3,0.5", "--tol", "1e-300"]).status.code(), Some(3));
    assert_eq!(bin_threads(&["connect"], "zero").status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn coefficients_truncate_for_zero_alpha() {
    let o = bin(&["coeffs", "--alpha", "0", "--n", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let values: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 11);
    assert_eq!(values[0], 1.0);
    assert!(values[1..].iter().all(|&v| v == 0.0));
}

#[test]
fn closed_form_and_recurrence_agree() {
    let read = |rule: &str| -> Vec<f64> {
        let o = bin(&["coeffs", "--n", "30", "--rule", rule, "--format", "csv"]);
        stdout(&o)
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect()
    };
    for (a, b) in read("recurrence").iter().zip(read("closed")) {
        assert!((a - b).abs() <= 1e-13 * b.abs().max(1e-300));
    }
}

#[test]
fn csv_is_deterministic_for_a_seed() {
    let args = ["connect", "--format", "csv", "--random", "6", "--seed", "11"];
    let one = bin_threads(&args, "1");
    let four = bin_threads(&args, "4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_ne!(one.stdout, bin(&["connect", "--format", "csv", "--random", "6", "--seed", "12"]).stdout);
    let text = stdout(&one);
    assert!(!text.contains('\r'));
    assert!(text.starts_with("set,item,branch_tag,row,col,re,im\n"));
}

#[test]
fn verify_passes_on_the_reference_parameters() {
    let o = bin(&["verify", "--alpha", "0.5", "--beta", "0.8", "--gamma", "0.9"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: VerifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.pass && r.max_residual <= 1e-8);
    assert_eq!(r.checks.len(), 8);
}

#[test]
fn verify_with_the_wrong_branch_fails_with_code_3() {
    let o = bin(&["verify", "--matrix", "inf+", "--branch", "plus"]);
    assert_eq!(o.status.code(), Some(3));
    let r: VerifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!r.pass);
}

#[test]
fn path_continuation_matches_the_series_inside_the_disc() {
    let cont = bin(&["eval", "--format", "csv", "--path", "0.2;0.2,0.3;0.6,0.3;0.6"]);
    let series = bin(&["eval", "--format", "csv", "--points", "0.6"]);
    let value = |o: &Output| -> (f64, f64) {
        let line = stdout(o).lines().nth(1).unwrap().to_string();
        let f: Vec<&str> = line.split(',').collect();
        (f[3].parse().unwrap(), f[4].parse().unwrap())
    };
    let (a, b) = (value(&cont), value(&series));
    assert!((a.0 - b.0).abs() < 1e-10 && (a.1 - b.1).abs() < 1e-10);
}

#[test]
fn limit_table_has_extrapolants_from_n_8() {
    let o = bin(&["limit-table", "--n-max", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 64);
    let last: Vec<&str> = rows[63].split(',').collect();
    let raw: f64 = last[5].parse().unwrap();
    let extrapolated: f64 = last[6].parse().unwrap();
    assert!(extrapolated < raw * 1e-3);
}

#[test]
fn lemma_report_passes() {
    let o = bin(&["lemmas", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn dat_output_for_gnuplot() {
    let o = bin(&["limit-table", "--n-max", "16", "--format", "dat"]);
    let text = stdout(&o);
    assert!(text.starts_with("# n raw_re"));
    assert!(text.lines().nth(1).unwrap().contains("NaN"));
}
