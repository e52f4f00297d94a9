//! End-to-end runs of the `shockprof` binary.

use std::process::{Command, Output};

use shockprof::dissipation::DissipationParams;
use shockprof::dynamics::IntegratorControls;
use shockprof::sweep::{linspace, sweep_from_csv, sweep_q};

fn shockprof(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_shockprof"));
    cmd.args(args).env_remove("SHOCKPROF_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8(b.to_vec()).unwrap()
}

#[test]
fn causality_example() {
    let out = shockprof(&["causality", "--eta", "1", "--mu", "7", "--nu", "20"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("strictly-causal"));
    assert!(stdout.contains("0.15572") && stdout.contains("0.57761"));
}

#[test]
fn profile_example() {
    let out = shockprof(
        &[
            "profile",
            "--eta",
            "1",
            "--mu",
            "7",
            "--nu",
            "20",
            "--q-tilde",
            "0.85",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("not-exists-attractor"));
}

#[test]
fn invalid_amplitude() {
    let out = shockprof(&["hugoniot", "--q-tilde", "0.5"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(text(&out.stderr).contains("(3/4, 1)"));
}

#[test]
fn inconclusive_exit_code() {
    let out = shockprof(&["profile", "--q-tilde", "0.75000000001"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stdout).contains("inconclusive"));
    assert!(!out.stderr.is_empty());
}

#[test]
fn sweep_csv_reparses_to_library_rows() {
    let out = shockprof(
        &["sweep", "--q-grid", "0.76:0.96:6", "--format", "csv"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = sweep_from_csv(&text(&out.stdout)).unwrap();
    let expected = sweep_q(
        &DissipationParams::default(),
        &linspace(0.76, 0.96, 6),
        &IntegratorControls::default(),
    );
    assert_eq!(rows.len(), expected.len());
    for (a, b) in rows.iter().zip(&expected) {
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}

#[test]
fn thread_variable_is_validated() {
    let out = shockprof(&["sweep"], &[("SHOCKPROF_THREADS", "zero")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("SHOCKPROF_THREADS"));
    let serial = shockprof(&["sweep", "--format", "csv"], &[("SHOCKPROF_THREADS", "1")]);
    let parallel = shockprof(&["sweep", "--format", "csv"], &[("SHOCKPROF_THREADS", "3")]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn csv_and_svg_files() {
    let dir = std::env::temp_dir().join(format!("shockprof-bin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let sweep = dir.join("sweep.csv");
    let region = dir.join("region.csv");
    let svg = dir.join("portrait.svg");
    let out = shockprof(
        &[
            "sweep",
            "--q-grid",
            "0.77:0.9:3",
            "--format",
            "csv",
            "--out",
            sweep.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(
        sweep_from_csv(&std::fs::read_to_string(&sweep).unwrap())
            .unwrap()
            .len(),
        3
    );
    let out = shockprof(
        &[
            "region",
            "--mu-grid",
            "1:7:3",
            "--nu-grid",
            "2:20:2",
            "--out",
            region.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&region)
        .unwrap()
        .starts_with("mu,nu,causality,has_critical_q,nu_star,sigma2_max\n"));
    let out = shockprof(
        &[
            "portrait",
            "--q-tilde",
            "0.85",
            "--nx",
            "8",
            "--ny",
            "8",
            "--svg",
            svg.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("connecting orbit no"));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<circle"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_outputs_parse() {
    for args in [
        vec!["hugoniot", "--format", "json"],
        vec!["causality", "--format", "json", "--adjudicate"],
        vec!["classify", "--format", "json"],
        vec!["profile", "--format", "json"],
        vec!["critical-q", "--format", "json"],
        vec!["sweep", "--q-grid", "0.77:0.8:2", "--format", "json"],
        vec![
            "region",
            "--mu-grid",
            "7:7:1",
            "--nu-grid",
            "20:20:1",
            "--format",
            "json",
        ],
        vec!["portrait", "--nx", "3", "--ny", "3", "--format", "json"],
    ] {
        let out = shockprof(&args, &[]);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        serde_json::from_slice::<serde_json::Value>(&out.stdout)
            .unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}
