// Power-law fit of the growth rate near a barrier.

use cgr_lab::criticality::{self, ModelForm};
use cgr_lab::functional::{self, GeneralizedProfile};
use cgr_lab::BulkModel;

pub fn run_example() {
    // synthetic data with a known exponent
    let samples: Vec<(f64, f64)> =
        functional::log_grid(1e-3, 0.5, 30).into_iter().map(|x| (0.5 + x, 1.0 + 3.0 * x.powf(2.5))).collect();
    let fit = criticality::fit_exponent(&samples, 0.5, ModelForm::PowerPlusConst, (0.0, 2.0)).unwrap();
    println!("synthetic: delta_hat {:.4} (true 2.5), alpha {:.4}, A {:.4}", fit.delta_hat, fit.alpha_const, fit.amplitude);

    let w = GeneralizedProfile::new(BulkModel::planar(4, 1.0, 1.0).unwrap(), 0.0);
    let r_i = functional::interior_maxima(&w, 0.05, functional::DEFAULT_GRID).unwrap()[0].r_i;
    let samples: Vec<(f64, f64)> = functional::log_grid(1e-3, 5e-2, 30)
        .into_iter()
        .map(|x| (r_i + x, criticality::local_cgr_model(&w, r_i + x).unwrap()))
        .collect();
    let fit = criticality::fit_exponent(&samples, r_i, ModelForm::PowerPlusConst, (0.0, 1.0)).unwrap();
    println!("barrier r_i {r_i:.6}: delta_hat {:.4}, r^2 {:.6}", fit.delta_hat, fit.fit_r2);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
