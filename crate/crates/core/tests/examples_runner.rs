//! Runs every example end to end.

mod barrier_scan {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/barrier_scan.rs"));
}
mod barrier_sensitivity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/barrier_sensitivity.rs"));
}
mod cli_run {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cli_run.rs"));
}
mod curvature_oracle {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/curvature_oracle.rs"));
}
mod curvature_weight {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/curvature_weight.rs"));
}
mod effective_potential {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/effective_potential.rs"));
}
mod exponent_fit {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/exponent_fit.rs"));
}
mod fefferman_graham {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fefferman_graham.rs"));
}
mod growth_rate_curve {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/growth_rate_curve.rs"));
}
mod planted_jump {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/planted_jump.rs"));
}
mod scaling_collapse {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scaling_collapse.rs"));
}
mod scaling_operator {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scaling_operator.rs"));
}
mod volume_oracle {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/volume_oracle.rs"));
}
mod weyl_decomposition {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/weyl_decomposition.rs"));
}

#[test]
fn barrier_scan_runs() {
    barrier_scan::run_example();
}

#[test]
fn barrier_sensitivity_runs() {
    barrier_sensitivity::run_example();
}

#[test]
fn cli_run_runs() {
    cli_run::run_example();
}

#[test]
fn curvature_oracle_runs() {
    curvature_oracle::run_example();
}

#[test]
fn curvature_weight_runs() {
    curvature_weight::run_example();
}

#[test]
fn effective_potential_runs() {
    effective_potential::run_example();
}

#[test]
fn exponent_fit_runs() {
    exponent_fit::run_example();
}

#[test]
fn fefferman_graham_runs() {
    fefferman_graham::run_example();
}

#[test]
fn growth_rate_curve_runs() {
    growth_rate_curve::run_example();
}

#[test]
fn planted_jump_runs() {
    planted_jump::run_example();
}

#[test]
fn scaling_collapse_runs() {
    scaling_collapse::run_example();
}

#[test]
fn scaling_operator_runs() {
    scaling_operator::run_example();
}

#[test]
fn volume_oracle_runs() {
    volume_oracle::run_example();
}

#[test]
fn weyl_decomposition_runs() {
    weyl_decomposition::run_example();
}
