// Curvature-weighted functionals: linear and squared weight laws.

use cgr_lab::functional::{self, interior_maxima, GeneralizedProfile, RadialWeight};
use cgr_lab::surfaces::{SurfaceConfig, SurfaceSolver};
use cgr_lab::BulkModel;

pub fn run_example() {
    let model = BulkModel::planar(4, 1.0, 1.0).unwrap();
    for (name, w) in [
        ("linear", GeneralizedProfile::new(model, 1e-5)),
        ("squared", GeneralizedProfile::squared(model, 1e-5)),
    ] {
        let top = interior_maxima(&w, 0.05, functional::DEFAULT_GRID).unwrap()[0];
        let s = SurfaceSolver::new(&w, SurfaceConfig::default()).unwrap();
        let rate = s.dominant_at(10.0).unwrap().cgr;
        println!(
            "{name:8} a(r_i) = {:.6}  barrier r = {:.6}  sqrt(U) = {:.6}  rate(10) = {:.6}",
            w.weight(top.r_i),
            top.r_i,
            top.level.sqrt(),
            rate
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
