//! CLI acceptance: byte-level determinism of the emitters, exit codes, and
//! the documented flag semantics.

use std::process::{Command, Output};

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_calderon"));
    cmd.args(args);
    cmd.env_remove("RI_GRID_PPD");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

#[test]
fn criterion_7_sweep_output_is_byte_identical() {
    let args = [
        "sweep", "--op", "R", "--domain", "2,2", "--target", "2,inf", "--family",
        "randmono:3", "--n", "5", "--seed", "11", "--grid", "16",
    ];
    let a = run(&args, &[]);
    let b = run(&args, &[]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "sweep output differs between identical runs");
    assert!(!a.stdout.is_empty());
    println!("PASS criterion 7: sweep output byte-identical across runs");
}

#[test]
fn criterion_7_selftest_output_is_byte_identical() {
    let a = run(&["selftest", "--grid", "16"], &[]);
    let b = run(&["selftest", "--grid", "16"], &[]);
    assert!(a.status.success(), "selftest failed:\n{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout, "selftest output differs between identical runs");
    println!("PASS criterion 7: selftest output byte-identical across runs and exits 0");
}

#[test]
fn verdict_examples_and_exit_codes() {
    // bounded: clause C-i
    let out = run(
        &["verdict", "--p0", "2", "--q0", "2", "--p1", "2", "--q1", "2", "--q", "4", "--r1", "2",
          "--s1", "2", "--s2", "inf"],
        &[],
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"combined\": \"C-i\""), "{text}");

    // s2 < s1: unbounded with the logpow witness
    let out = run(&["verdict", "--r1", "3", "--s1", "2", "--s2", "1"], &[]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"bounded\": false"));
    assert!(text.contains("\"witness_family\": \"logpow\""));

    // r1 below p0: unbounded before any target is considered
    let out = run(&["verdict", "--r1", "1", "--s1", "1"], &[]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"clause\": \"nontriviality\""));

    // parameter violations exit 2 and name the failed bound
    let out = run(&["verdict", "--p0", "4", "--q", "3", "--r1", "2", "--s1", "1"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p0 < q"));

    // non-normable domain also exits 2
    let out = run(&["verdict", "--r1", "1", "--s1", "2"], &[]);
    assert_eq!(out.status.code(), Some(2));

    // floats are rejected for space parameters
    let out = run(&["verdict", "--r1", "2.5", "--s1", "1"], &[]);
    assert_eq!(out.status.code(), Some(2));
    println!("PASS: verdict examples and exit codes");
}

#[test]
fn grid_env_override_and_flag_priority() {
    let args = ["sweep", "--op", "S", "--domain", "4,1", "--target", "inf,inf", "--family",
        "char:0,1", "--n", "2", "--seed", "0"];
    let with_env = run(&args, &[("RI_GRID_PPD", "16")]);
    assert!(String::from_utf8_lossy(&with_env.stdout).contains("# grid_ppd: 16"));

    let mut flagged = args.to_vec();
    flagged.extend(["--grid", "8"]);
    let with_flag = run(&flagged, &[("RI_GRID_PPD", "16")]);
    assert!(String::from_utf8_lossy(&with_flag.stdout).contains("# grid_ppd: 8"));
    println!("PASS: RI_GRID_PPD honored, --grid wins");
}

#[test]
fn kfunc_and_counterexample_emit_expected_rows() {
    let out = run(&["kfunc", "--couple", "target", "--f", "char:0,1", "-t", "0.5"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("findex,t,oracle,holmstedt,ratio"));
    assert!(text.contains("0,5.0000000000000000e-1,5.0000000000000000e-1,5.0000000000000000e-1"));

    let out = run(&["counterexample", "--tmax-list", "1e2,1e4", "--grid", "16"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "t_max,f0_norm,s_norm_truncated,loglog_ratio");
    assert_eq!(rows.len(), 3);
    println!("PASS: kfunc and counterexample CSV shapes");
}
