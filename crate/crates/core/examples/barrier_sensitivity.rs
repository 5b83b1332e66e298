// How the barrier moves with the coupling.

use cgr_lab::functional::{self, GeneralizedProfile};
use cgr_lab::jumps::{self, PlantedBarrier, SensitivityOptions};
use cgr_lab::BulkModel;

pub fn run_example() {
    let w = GeneralizedProfile::new(BulkModel::planar(4, 1.0, 1.0).unwrap(), 0.0);
    for gamma in [0.0, 1e-5, 1e-4] {
        let w = GeneralizedProfile { gamma, ..w };
        let cp = functional::interior_maxima(&w, 0.05, functional::DEFAULT_GRID).unwrap()[0];
        let rec = jumps::sensitivity(&w, &cp, SensitivityOptions::default()).unwrap();
        println!(
            "gamma {gamma:7.1e}: r_i {:.6}  implicit {:.4}  difference {:.4}  truncated {:.1} (ratio {:.3})",
            rec.r_i, rec.dri_dgamma_ift, rec.dri_dgamma_fd, rec.dri_dgamma_paper, rec.paper_ratio
        );
    }
    // the distance between two barriers needs a second one; plant it
    let planted = PlantedBarrier::new(w, 1.6, 0.45, 0.05);
    let flow = jumps::jump_distance_flow(&planted, &[0.0, 2e-5, 4e-5, 6e-5]).unwrap();
    print!("{}", jumps::flow_table(&flow).to_csv().unwrap());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
