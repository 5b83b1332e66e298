// Driving a run programmatically and reading its manifest.

use cgr_lab::app::{self, RunConfig, TauGrid};

pub fn run_example() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        gamma: 1e-5,
        tau: TauGrid { min: 0.0, max: 10.0, count: 21 },
        out: dir.path().join("curve"),
        ..RunConfig::default()
    };
    let manifest = app::execute("cgr-curve", &cfg).unwrap();
    println!("{} {} in {:.2}s", manifest.subcommand, manifest.status, manifest.wall_time_s);
    for a in &manifest.artifacts {
        println!("  {:16} {:6} bytes  {}", a.file, a.bytes, &a.sha256[..16]);
    }
    // the same run from the command line
    let code = app::run_subcommand(
        ["cgr-lab", "potential", "--family", "planar-sads", "--d", "4", "--L", "1", "--rh", "1", "--out"]
            .iter()
            .map(std::ffi::OsString::from)
            .chain([dir.path().join("potential").into_os_string()]),
    );
    println!("potential exit code {code}");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
