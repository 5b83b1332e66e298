// Barrier counts across the coupling, and where the barrier disappears.

use cgr_lab::functional::{self, GammaFamily, GeneralizedProfile};
use cgr_lab::jumps;
use cgr_lab::BulkModel;

pub fn run_example() {
    let model = BulkModel::planar(4, 1.0, 1.0).unwrap();
    let w = GeneralizedProfile::new(model, 0.0);
    for gamma in [0.0, 1e-5, 1e-4, 3e-4, 1e-2] {
        let n = jumps::barrier_count(&w.with_gamma(gamma), functional::DEFAULT_GRID).unwrap();
        println!("gamma {gamma:8.1e}: {n} barrier(s)");
    }
    let merger = jumps::barrier_merger(&w, 1e-5, 1e-3).unwrap();
    println!("barrier merges with the wall minimum at gamma = {:.6e}, r = {:.6}", merger.gamma, merger.r);
    match jumps::auto_scan_double_barrier(&model, 1e-8, 1e2) {
        Ok(g) => println!("two barriers from gamma = {g:e}"),
        Err(e) => println!("double-barrier scan: {e}"),
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
