// Residual of the first-order scaling operator on tabulated growth rates.

use cgr_lab::criticality::{self, CgrGrid, ChainCoefficient};
use cgr_lab::functional::GeneralizedProfile;
use cgr_lab::BulkModel;

pub fn run_example() {
    let model = BulkModel::planar(4, 1.0, 1.0).unwrap();
    // an exact power law is annihilated with mu = 1, nu = 0
    let r: Vec<f64> = (0..41).map(|k| 0.5 + 0.0125 * k as f64).collect();
    let grid = CgrGrid::tabulate(r.clone(), vec![1e-5], |r, _| r.powi(4));
    let res = criticality::cs_residual(&grid, &model, ChainCoefficient::Plain, 1.0, 0.0, 4.0).unwrap();
    println!("power law: residual {res:.1e}");

    let gammas: Vec<f64> = (0..5).map(|k| 1e-5 * (1.0 + 0.1 * k as f64)).collect();
    let grid = CgrGrid::tabulate(r, gammas, |r, g| {
        criticality::local_cgr_model(&GeneralizedProfile::new(model, g), r).unwrap_or(f64::NAN)
    });
    for chain in [ChainCoefficient::Plain, ChainCoefficient::RadialWeighted] {
        let res = criticality::cs_residual(&grid, &model, chain, 1.0, 1.0, 4.0).unwrap();
        println!("{chain:?}: residual {res:.6e}");
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
