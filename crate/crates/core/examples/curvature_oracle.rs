// Closed-form Weyl square against a finite-difference Riemann tensor.

use cgr_lab::{BulkModel, Family};

pub fn run_example() {
    let ads = BulkModel::vacuum(Family::PlanarSads, 4, 1.0).unwrap();
    let s = ads.curvature_oracle(2.0).unwrap();
    println!("pure AdS5: K = {:.6}, C^2 = {:.1e}", s.kretschmann.unwrap(), s.weyl_sq);
    for family in [Family::PlanarSads, Family::GlobalSads] {
        let m = BulkModel::new(family, 4, 1.0, 1.0).unwrap();
        for r in [0.5, 2.0, 8.0] {
            let exact = m.weyl_squared(r).unwrap();
            let fd = m.curvature_oracle(r).unwrap().weyl_sq;
            println!("{:12} r = {r:3}: closed form {exact:.8e}, oracle {fd:.8e}", family.as_str());
        }
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
