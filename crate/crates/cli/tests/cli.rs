//! End-to-end tests of the `fano` binary: exit codes, output formats,
//! and the family-file front end.

use std::io::Write;
use std::process::{Command, Output};

fn fano(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fano"))
        .args(args)
        .output()
        .expect("failed to spawn fano")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout not UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

#[test]
fn div_kl_plain_single_value() {
    let out = fano(&["div", "--f", "kl", "--p", "0.5,0.5", "--q", "0.25,0.75"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0.143841\n");
}

#[test]
fn div_disjoint_support_is_inf() {
    let out = fano(&["div", "--f", "kl", "--p", "1,0", "--q", "0,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "inf\n");
}

#[test]
fn div_hellinger_disjoint_hits_maximum() {
    let out = fano(&["div", "--f", "hellinger", "--p", "1,0", "--q", "0,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "2.000000\n");
}

#[test]
fn div_precise_flag_prints_full_precision() {
    let out = fano(&[
        "div", "--precise", "--f", "kl", "--p", "0.5,0.5", "--q", "0.25,0.75",
    ]);
    assert_eq!(code(&out), 0);
    let p = fano_core::divergences::FiniteDist::new(vec![0.5, 0.5]).unwrap();
    let q = fano_core::divergences::FiniteDist::new(vec![0.25, 0.75]).unwrap();
    let expected =
        fano_core::divergences::divergence_finite(fano_core::divergences::Generator::Kl, &p, &q)
            .unwrap()
            .to_f64();
    assert_eq!(stdout(&out), format!("{expected}\n"));
    assert!((expected - 0.14384103622589042).abs() < 1e-15);
}

#[test]
fn div_bad_weight_exits_2() {
    let out = fano(&["div", "--f", "kl", "--p", "0.5,nope", "--q", "0.5,0.5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn div_negative_weight_exits_2() {
    let out = fano(&["div", "--f", "kl", "--p", "-0.5,1.5", "--q", "0.5,0.5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bounds_csv_has_stable_header_and_rows() {
    let out = fano(&[
        "bounds",
        "--q-bar",
        "0.25",
        "--d-bar",
        "0.1",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,value,vacuous");
    let names: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(
        names,
        ["classic", "refined", "affine", "kl_sqrt", "kl_sqrt_max", "chi2", "hellinger"]
    );
    // every data row parses back as value,bool
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        fields[1].parse::<f64>().unwrap();
        fields[2].parse::<bool>().unwrap();
    }
}

#[test]
fn bounds_infinite_divergence_is_vacuous() {
    let out = fano(&[
        "bounds",
        "--q-bar",
        "0.25",
        "--d-bar",
        "inf",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    // all KL/chi2 rows are clamped to 1 and flagged vacuous; the
    // Hellinger row is absent because the divergence exceeds 2
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",1.000000,true"), "unexpected row: {line}");
        assert!(!line.starts_with("hellinger"));
    }
}

#[test]
fn bounds_degenerate_q_bar_exits_3() {
    let out = fano(&["bounds", "--q-bar", "1", "--d-bar", "0.1"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("q_bar"));
}

#[test]
fn bounds_q_bar_out_of_range_exits_2() {
    let out = fano(&["bounds", "--q-bar", "1.5", "--d-bar", "0.1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bounds_bad_d_bar_exits_2() {
    let out = fano(&["bounds", "--q-bar", "0.25", "--d-bar", "wat"]);
    assert_eq!(code(&out), 2);
    let out = fano(&["bounds", "--q-bar", "0.25", "--d-bar", "-0.5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bounds_family_file_with_comments_and_inf() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# weight,p_exp,q_exp,div").unwrap();
    writeln!(f, "0.5, 0.9, 0.2, 0.05").unwrap();
    writeln!(f).unwrap();
    writeln!(f, "0.5, 0.8, 0.3, inf").unwrap();
    let out = fano(&[
        "bounds",
        "--family",
        f.path().to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    // averaged divergence is infinite, so every bound is vacuous
    for line in stdout(&out).lines().skip(1) {
        assert!(line.ends_with(",1.000000,true"), "unexpected row: {line}");
    }
}

#[test]
fn bounds_family_file_finite_average() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "0.25,0.9,0.25,0.2").unwrap();
    writeln!(f, "0.75,0.7,0.25,0.4").unwrap();
    let out = fano(&[
        "bounds",
        "--family",
        f.path().to_str().unwrap(),
        "--format",
        "json-lines",
        "--precise",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    // classic row: (d_bar + ln 2)/ln 4 over q_bar = 0.25, with d_bar
    // accumulated exactly as `reduce` does
    let d_bar = 0.25f64 * 0.2 + 0.75f64 * 0.4;
    let expected = (d_bar + std::f64::consts::LN_2) / 4.0f64.ln();
    let first = text.lines().next().unwrap();
    assert!(first.contains("\"family\":\"classic\""));
    assert!(
        first.contains(&format!("\"value\":{expected}")),
        "row was: {first}"
    );
}

#[test]
fn bounds_family_file_malformed_exits_2() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "0.5,0.9,0.2").unwrap();
    let out = fano(&["bounds", "--family", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let out = fano(&["bounds", "--family", "/definitely/not/a/file"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn birge_table_matches_reference_digits() {
    let out = fano(&["birge", "--n", "2,3,100", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,c_n,d_n,massart");
    assert!(lines[1].starts_with("2,0.7586"), "row was: {}", lines[1]);
    assert!(lines[1].contains(",0.7427"), "row was: {}", lines[1]);
    assert!(lines[2].starts_with("3,0.7126"), "row was: {}", lines[2]);
    assert!(lines[2].contains(",0.7008"), "row was: {}", lines[2]);
    for line in &lines[1..] {
        assert!(line.ends_with("0.816060"), "row was: {line}");
    }
}

#[test]
fn birge_rejects_degenerate_count() {
    let out = fano(&["birge", "--n", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn apps_posterior_with_radius() {
    let out = fano(&[
        "apps",
        "posterior",
        "--d",
        "1",
        "--n",
        "64",
        "--sigma",
        "8",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "c_d,rho_star,epsilon_n");
    assert!(lines[1].starts_with("0.546504,"), "row was: {}", lines[1]);
    assert!(lines[1].ends_with(",0.125000"), "row was: {}", lines[1]);
}

#[test]
fn apps_regret_reports_regime() {
    let out = fano(&[
        "apps", "regret", "--N", "16", "--s", "4", "--T", "1600", "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "bound,epsilon_used,regime");
    assert!(lines[1].starts_with("1.040693,"), "row was: {}", lines[1]);
    assert!(lines[1].ends_with(",large_horizon"), "row was: {}", lines[1]);

    let out = fano(&["apps", "regret", "--N", "16", "--s", "4", "--T", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("regime=small_horizon"));

    let out = fano(&["apps", "regret", "--N", "16", "--s", "0", "--T", "100"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("regime=zero_sparsity"));
}

#[test]
fn apps_regret_bad_shape_exits_2() {
    let out = fano(&["apps", "regret", "--N", "1", "--s", "0", "--T", "10"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn apps_cramer_rates_ordered() {
    let out = fano(&[
        "apps", "cramer", "--theta", "0.5", "--x", "0.75", "--n", "100", "--format", "json-lines",
        "--precise",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let grab = |key: &str| -> f64 {
        let tail = text.split(&format!("\"{key}\":")).nth(1).unwrap();
        tail.trim_end_matches(['}', '\n'])
            .split(',')
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    let emp = grab("empirical_rate");
    let lim = grab("limit_rate");
    assert!(emp <= lim && lim < 0.0, "emp={emp}, lim={lim}");
}

#[test]
fn apps_cramer_bad_range_exits_2() {
    let out = fano(&["apps", "cramer", "--theta", "0.75", "--x", "0.5", "--n", "10"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn apps_dd_infinite_modulus_gives_zero() {
    let out = fano(&["apps", "dd", "--psi", "inf", "--n", "10", "--c", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0.000000\n");
}

#[test]
fn apps_dd_gaussian_closed_form() {
    // psi = 2 eps^2 / sigma^2 = 0.08; bound = 2^{-2} e^{-2 * 10 * 0.08}
    let out = fano(&[
        "apps", "dd", "--epsilon", "0.2", "--sigma", "1", "--n", "10", "--c", "2", "--precise",
    ]);
    assert_eq!(code(&out), 0);
    let got: f64 = stdout(&out).trim().parse().unwrap();
    assert!((got - 0.25 * (-1.6f64).exp()).abs() < 1e-15);
}

#[test]
fn apps_dd_requires_psi_or_pair() {
    let out = fano(&["apps", "dd", "--epsilon", "0.2", "--n", "10", "--c", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_quick_passes_and_is_deterministic() {
    let a = fano(&["verify", "--seed", "3", "--format", "csv"]);
    assert_eq!(code(&a), 0);
    let b = fano(&["verify", "--seed", "3", "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.lines().next().unwrap().starts_with("check_name,"));
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn verify_different_seeds_differ() {
    let a = fano(&["verify", "--seed", "3", "--format", "csv", "--precise"]);
    let b = fano(&["verify", "--seed", "4", "--format", "csv", "--precise"]);
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    assert_ne!(a.stdout, b.stdout);
}
