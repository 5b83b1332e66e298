// Leading falloff of the Weyl square against boundary stress data.

use cgr_lab::fg;
use cgr_lab::BulkModel;

pub fn run_example() {
    let rep = fg::weyl_decomposition_check(&BulkModel::planar(4, 1.0, 1.0).unwrap()).unwrap();
    println!("c_inf {:.6}, shear {:.6}, ratio {:?}", rep.c_inf, rep.s_components.shear_term, rep.ratio);
    let models: Vec<BulkModel> = [0.8, 1.0, 1.25].iter().map(|&r| BulkModel::planar(4, 1.0, r).unwrap()).collect();
    let sweep = fg::ratio_constancy(&models).unwrap();
    print!("{}", sweep.table().to_csv().unwrap());
    println!("spread {:.1e}", sweep.spread);
    let vac = fg::weyl_decomposition_check(&BulkModel::vacuum(cgr_lab::Family::PlanarSads, 4, 1.0).unwrap()).unwrap();
    println!("vacuum: vacuous = {}", vac.vacuous);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
