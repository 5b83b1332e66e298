// Rescaling radius and coupling together and checking the log-log collapse.

use cgr_lab::criticality;
use cgr_lab::functional::{self, GeneralizedProfile};
use cgr_lab::BulkModel;

pub fn run_example() {
    let w = GeneralizedProfile::new(BulkModel::planar(4, 1.0, 1.0).unwrap(), 1e-5);
    let r_i = functional::interior_maxima(&w, 0.05, functional::DEFAULT_GRID).unwrap()[0].r_i;
    let eval = criticality::family_evaluator(&w);
    let lambdas = functional::log_grid(0.5, 2.0, 9);
    for nu in [0.0, 1.0] {
        let rep = criticality::scaling_collapse(&eval, r_i, 1e-5, &lambdas, 1.0, nu).unwrap();
        println!("nu = {nu}: slope {:.4}, residual {:.4}, dropped {}", rep.delta_collapse, rep.residual, rep.dropped);
        if nu == 0.0 {
            print!("{}", rep.table().to_csv().unwrap());
        }
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
