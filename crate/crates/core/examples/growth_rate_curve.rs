// Growth rate of the volume functional against boundary time.

use cgr_lab::functional::GeneralizedProfile;
use cgr_lab::surfaces::{cgr_curve, SurfaceConfig};
use cgr_lab::BulkModel;

pub fn run_example() {
    let w = GeneralizedProfile::new(BulkModel::planar(4, 1.0, 1.0).unwrap(), 0.0);
    let grid: Vec<f64> = (0..=10).map(|k| 0.8 * k as f64).collect();
    let curve = cgr_curve(&w, &grid, SurfaceConfig::default()).unwrap();
    for p in &curve.points {
        println!("tau {:5.2}  rate {:.6}  r_min {:.6}", p.tau, p.cgr, p.r_min);
    }
    // late times approach the square root of the barrier level, 1/2
    let late = curve.points.last().unwrap().cgr;
    println!("late-time rate {late:.6}");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
