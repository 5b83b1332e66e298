// Near-boundary expansion of the black brane and its boundary data.

use cgr_lab::fg::{self, SchoutenNorm};
use cgr_lab::BulkModel;

pub fn run_example() {
    for model in [BulkModel::planar(4, 1.0, 1.0).unwrap(), BulkModel::global(4, 1.0, 0.8).unwrap()] {
        let s = fg::fg_series_fit(&model).unwrap();
        println!("{} r_h = {}", model.family.as_str(), model.r_h);
        println!("  g0 {:?}", s.g0.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>());
        println!("  g2 {:?}", s.g2.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>());
        println!("  g4 {:?}", s.g4.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>());
        println!("  fit residual {:.1e}, condition {:.1e}", s.fit_residual, s.condition);
        let data = fg::boundary_data(&model, &s, SchoutenNorm::Literal).unwrap();
        println!("  stress trace {:.2e}, schouten {:?}", data.trace, data.schouten);
    }
    let m = BulkModel::planar(4, 1.0, 1.0).unwrap();
    let rho = fg::fg_gauge_map(&m, 3.0).unwrap();
    println!("r = 3 maps to rho = {rho:.9}, back to {:.9}", fg::fg_inverse(&m, rho).unwrap());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
