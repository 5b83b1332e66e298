// Interior effective potential and its critical points.

use cgr_lab::functional::{self, find_critical_points, GeneralizedProfile, PotentialProfile};
use cgr_lab::BulkModel;

pub fn run_example() {
    let model = BulkModel::planar(4, 1.0, 1.0).unwrap();
    for gamma in [0.0, 1e-4] {
        let w = GeneralizedProfile::new(model, gamma);
        let cps = find_critical_points(&w, 0.05, 1.0 - 1e-12, functional::DEFAULT_GRID).unwrap();
        println!("gamma = {gamma:e}");
        for cp in &cps {
            println!("  {:?} at r = {:.9}, U = {:.9}", cp.kind, cp.r_i, cp.level);
        }
    }
    let profile = PotentialProfile::build(&GeneralizedProfile::new(model, 0.0), 0.05, 1.0, 101).unwrap();
    let csv = profile.table().to_csv().unwrap();
    for line in csv.lines().step_by(20) {
        println!("{line}");
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
