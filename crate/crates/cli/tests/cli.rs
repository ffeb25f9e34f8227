// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn partcorr(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_partcorr"));
    for (k, _) in std::env::vars() {
        if k.starts_with("PARTCORR_") {
            cmd.env_remove(k);
        }
    }
    cmd.args(args);
    cmd
}

fn ok(mut cmd: Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn header_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().expect("numeric field")).collect())
        .collect()
}

#[test]
fn noiseless_run_has_expected_schema_and_length() {
    let out = ok(partcorr(&["run", "--model", "bose", "--state", "PsiB", "--noise", "none", "--v", "0", "--tmax", "20", "--seed", "7"]));
    let text = String::from_utf8(out.stdout).unwrap();
    let columns = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(columns, "tau,P11,E_modes,E_P,D_P,purity,S_D,conv");
    let rows = data_rows(&text);
    assert!((395..=405).contains(&rows.len()), "{} rows", rows.len());
    assert!(rows.iter().all(|r| r.len() == 8));
    assert_eq!(rows[0][0], 0.0);
    assert!((rows.last().unwrap()[0] - 20.0).abs() < 1e-9);
    assert!((rows[0][3] - 1.0).abs() < 1e-6 && (rows[0][4] - 1.0).abs() < 1e-6);
}

#[test]
fn header_is_toml_and_reproduces_the_run() {
    let out = ok(partcorr(&["run", "--noise", "rtn", "--histories", "10", "--tmax", "1", "--seed", "5"]));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# partcorr "));
    let toml: String = text
        .lines()
        .skip(1)
        .take_while(|l| l.starts_with('#'))
        .filter(|l| !l.starts_with("# run_v") && !l.starts_with("# max_conv"))
        .map(|l| format!("{}\n", &l[2..]))
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, &toml).unwrap();
    let again = ok(partcorr(&["run", "--config", cfg.to_str().unwrap()]));
    assert_eq!(text.as_bytes(), &again.stdout[..]);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let path = dir.path().join(name);
        ok(partcorr(&[
            "run", "--noise", "pink", "--nf", "4", "--histories", "24", "--tmax", "2", "--seed", seed, "--out",
            path.to_str().unwrap(),
        ]));
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv", "3");
    assert_eq!(a, run("b.csv", "3"));
    assert_ne!(a, run("c.csv", "4"));
}

#[test]
fn several_interactions_get_separate_files() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("out.csv");
    ok(partcorr(&["run", "--v", "2,-2", "--tmax", "1", "--out", base.to_str().unwrap()]));
    for v in ["2", "-2"] {
        let p = dir.path().join(format!("out_v{v}.csv"));
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(header_value(&text, "run_v"), Some(v));
    }
    assert!(!Path::new(&base).exists());
}

#[test]
fn flags_beat_environment_beat_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "model = \"fermi\"\nseed = 1\ntmax = 0.5\nhistories = 2\nnoise = \"rtn\"\n").unwrap();
    let mut cmd = partcorr(&["run", "--config", cfg.to_str().unwrap()]);
    cmd.env("PARTCORR_SEED", "2");
    let text = String::from_utf8(ok(cmd).stdout).unwrap();
    assert_eq!(header_value(&text, "model"), Some("\"fermi\""));
    assert_eq!(header_value(&text, "state"), Some("\"PsiF\""));
    assert_eq!(header_value(&text, "seed"), Some("2"));

    let mut cmd = partcorr(&["run", "--config", cfg.to_str().unwrap(), "--seed", "3"]);
    cmd.env("PARTCORR_SEED", "2");
    let text = String::from_utf8(ok(cmd).stdout).unwrap();
    assert_eq!(header_value(&text, "seed"), Some("3"));
}

#[test]
fn bad_input_exits_with_usage_error() {
    for args in [
        &["run", "--bogus"][..],
        &["run", "--noise", "purple"],
        &["run", "--noise", "pink", "--alpha", "2"],
        &["run", "--model", "fermi", "--state", "PsiB"],
        &["run", "--dt", "-1"],
    ] {
        let out = partcorr(args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("typo.toml");
    std::fs::write(&cfg, "modle = \"bose\"\n").unwrap();
    let out = partcorr(&["run", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pink_spectrum_has_unit_slope() {
    let out = ok(partcorr(&["spectrum", "--noise", "pink", "--realizations", "40", "--seed", "1"]));
    let text = String::from_utf8(out.stdout).unwrap();
    let alpha: f64 = header_value(&text, "fitted_alpha")
        .and_then(|v| v.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((alpha - 1.0).abs() < 0.25, "alpha = {alpha}");
    let rows = data_rows(&text);
    assert!(rows.iter().all(|r| r.len() == 2 && r[1] >= 0.0));
}

#[test]
fn oracle_command_passes() {
    let out = ok(partcorr(&["oracle", "--samples", "100"]));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}
