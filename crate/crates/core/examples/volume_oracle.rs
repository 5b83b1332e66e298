// Direct maximization of the discretized functional, compared with the
// momentum method.

use cgr_lab::functional::GeneralizedProfile;
use cgr_lab::surfaces::{SurfaceConfig, SurfaceSolver, VolumeOracle};
use cgr_lab::BulkModel;

pub fn run_example() {
    let w = GeneralizedProfile::new(BulkModel::planar(4, 1.0, 1.0).unwrap(), 1e-4);
    let s = SurfaceSolver::new(&w, SurfaceConfig::default()).unwrap();
    let oracle = VolumeOracle::new(&w, 128, s.r_cut()).unwrap().outer_basin().unwrap();
    for tau in [0.5, 2.0] {
        let m = s.dominant_at(tau).unwrap();
        let o = oracle.maximize(tau, 5).unwrap();
        println!(
            "tau {tau}: momentum {:.6} (r_min {:.6})  oracle {:.6} (r0 {:.6})  rel diff {:.1e}",
            m.complexity,
            m.r_min,
            o.value,
            o.r0,
            ((o.value - m.complexity) / m.complexity).abs()
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
