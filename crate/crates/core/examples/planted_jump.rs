// A second barrier planted by a Gaussian bump makes the growth rate jump.

use cgr_lab::functional::GeneralizedProfile;
use cgr_lab::jumps::{self, PlantedBarrier};
use cgr_lab::surfaces::{SurfaceConfig, SurfaceSolver};
use cgr_lab::BulkModel;

pub fn run_example() {
    let base = GeneralizedProfile::new(BulkModel::planar(4, 1.0, 1.0).unwrap(), 0.0);
    let w = PlantedBarrier::new(base, 1.6, 0.45, 0.05);
    let s = SurfaceSolver::new(&w, SurfaceConfig::default()).unwrap();
    let grid: Vec<f64> = (0..=100).map(|k| 0.2 * k as f64).collect();
    let curve = s.curve(&grid).unwrap();
    for e in jumps::detect_jumps(&curve, &s, 1e-7) {
        println!(
            "jump at tau* = {:.6}: branch {} -> {}, height {:.6}, barrier gap {:.6}",
            e.tau_star,
            e.branch_before,
            e.branch_after,
            e.delta_cgr,
            e.barrier_delta.unwrap_or(f64::NAN)
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
