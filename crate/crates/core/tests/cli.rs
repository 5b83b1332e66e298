use std::path::Path;
use std::process::Command;

use cgr_lab::app::{self, Manifest, RunConfig};

const BIN: &str = env!("CARGO_BIN_EXE_cgr-lab");
const SUBCOMMANDS: [&str; 7] = ["potential", "cgr-curve", "jumps", "sweep-gamma", "crit-fit", "fg-check", "oracle-check"];

fn run(args: &[&str]) -> i32 {
    Command::new(BIN).args(args).output().unwrap().status.code().unwrap()
}

fn base<'a>(sub: &'a str, out: &'a str) -> Vec<&'a str> {
    vec![sub, "--family", "planar-sads", "--d", "4", "--L", "1", "--rh", "1", "--out", out]
}

fn manifest(dir: &Path) -> Manifest {
    serde_json::from_str(&std::fs::read_to_string(dir.join("run.json")).unwrap()).unwrap()
}

#[test]
fn every_subcommand_has_help() {
    for sub in SUBCOMMANDS {
        assert_eq!(run(&[sub, "--help"]), 0, "{sub}");
    }
    assert_eq!(run(&["--version"]), 0);
}

#[test]
fn missing_flag_is_a_config_error_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let out = out.to_str().unwrap();
    for sub in SUBCOMMANDS {
        let mut args = base(sub, out);
        args.drain(3..5);
        assert_eq!(run(&args), app::EXIT_CONFIG, "{sub}");
    }
    assert!(!Path::new(out).exists());
    assert_eq!(run(&["no-such-command"]), app::EXIT_CONFIG);
    assert_eq!(run(&["potential", "--d", "four"]), app::EXIT_CONFIG);
}

#[test]
fn invalid_values_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let mut args = base("potential", out.to_str().unwrap());
    args.extend(["--rh", "-1"]);
    assert_eq!(run(&args), app::EXIT_CONFIG);
}

#[test]
fn numerical_failure_leaves_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let mut args = base("crit-fit", out.to_str().unwrap());
    // above the merger coupling there is no barrier to fit against
    args.extend(["--gamma", "1e-3"]);
    assert_eq!(run(&args), app::EXIT_NUMERICAL);
    assert!(out.join("failure.json").exists());
    assert_ne!(manifest(&out).status, "ok");
}

#[test]
fn manifest_lists_every_artifact_with_its_hash() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["potential", "cgr-curve", "fg-check"] {
        let out = dir.path().join(sub);
        let mut args = base(sub, out.to_str().unwrap());
        args.extend(["--tau-count", "41", "--gamma", "1e-5"]);
        assert_eq!(run(&args), app::EXIT_OK, "{sub}");
        let m = manifest(&out);
        assert_eq!(m.subcommand, sub);
        assert!(!m.artifacts.is_empty());
        let mut on_disk: Vec<String> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n != "run.json")
            .collect();
        on_disk.sort();
        let mut listed: Vec<String> = m.artifacts.iter().map(|a| a.file.clone()).collect();
        listed.sort();
        assert_eq!(listed, on_disk);
        for a in &m.artifacts {
            let bytes = std::fs::read(out.join(&a.file)).unwrap();
            assert_eq!(a.sha256, app::sha256_hex(&bytes));
            assert_eq!(a.bytes, bytes.len());
        }
    }
}

#[test]
fn config_file_round_trips_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { gamma: 1e-5, out: dir.path().join("from-file"), ..RunConfig::default() };
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, cfg.render().unwrap()).unwrap();
    assert_eq!(RunConfig::parse(&cfg.render().unwrap()).unwrap(), cfg);

    let out = dir.path().join("from-flags");
    let code = run(&["potential", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap(), "--gamma", "2e-5"]);
    assert_eq!(code, app::EXIT_OK);
    let m = manifest(&out);
    assert_eq!(m.config.gamma, 2e-5);
    assert_eq!(m.config.r_h, cfg.r_h);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut hashes = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}"));
        let mut args = base("jumps", out.to_str().unwrap());
        args.extend(["--tau-count", "41", "--gamma", "1e-5", "--workers", if k == 0 { "1" } else { "4" }]);
        assert_eq!(run(&args), app::EXIT_OK);
        let mut csv: Vec<_> = manifest(&out).artifacts.into_iter().filter(|a| a.file.ends_with(".csv")).map(|a| (a.file, a.sha256)).collect();
        csv.sort();
        hashes.push(csv);
    }
    assert!(!hashes[0].is_empty());
    assert_eq!(hashes[0], hashes[1]);
}
