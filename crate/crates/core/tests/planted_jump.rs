//! Branch switching on a weight with a planted inner barrier.

use cgr_lab::functional::{self, effective_potential, GeneralizedProfile};
use cgr_lab::jumps::{self, JumpEvent, PlantedBarrier, SensitivityOptions};
use cgr_lab::surfaces::{SurfaceConfig, SurfaceSolver};
use cgr_lab::BulkModel;

fn planted(amplitude: f64) -> PlantedBarrier {
    PlantedBarrier::new(GeneralizedProfile::new(BulkModel::planar(4, 1.0, 1.0).unwrap(), 0.0), amplitude, 0.45, 0.05)
}

fn events(w: &PlantedBarrier, n: usize, prefactor: f64) -> Vec<JumpEvent> {
    let s = SurfaceSolver::new(w, SurfaceConfig { prefactor, ..SurfaceConfig::default() }).unwrap();
    let grid: Vec<f64> = (0..=n).map(|k| 20.0 * k as f64 / n as f64).collect();
    jumps::detect_jumps(&s.curve(&grid).unwrap(), &s, 1e-7)
}

#[test]
fn switch_time_is_grid_independent() {
    let w = planted(1.6);
    let (a, b) = (events(&w, 100, 1.0), events(&w, 200, 1.0));
    assert_eq!((a.len(), b.len()), (1, 1));
    assert!((a[0].tau_star - b[0].tau_star).abs() < 1e-3);
}

#[test]
fn late_switch_height_is_the_barrier_gap() {
    let w = planted(1.6);
    for prefactor in [1.0, 2.5] {
        let e = events(&w, 200, prefactor)[0];
        let (rb, ra) = (e.r_before.unwrap(), e.r_after.unwrap());
        let gap = prefactor * (effective_potential(&w, ra).unwrap().sqrt() - effective_potential(&w, rb).unwrap().sqrt());
        assert!((e.delta_cgr.abs() - gap.abs()).abs() < 1e-6, "{e:?}");
        assert!((e.barrier_delta.unwrap() - gap).abs() < 1e-12);
    }
}

#[test]
fn early_switch_is_below_the_barrier_gap() {
    // the new branch has not saturated yet when it takes over
    let e = events(&planted(2.0), 200, 1.0)[0];
    assert!(e.delta_cgr > e.barrier_delta.unwrap());
    assert!(e.tau_star < 3.0);
}

#[test]
fn switch_is_bracketed_by_the_grid() {
    for amplitude in [1.6, 2.0, 3.0] {
        for e in events(&planted(amplitude), 150, 1.0) {
            assert!(e.bracket.0 < e.tau_star && e.tau_star < e.bracket.1, "{e:?}");
            assert_ne!(e.branch_before, e.branch_after);
        }
    }
}

#[test]
fn weak_bump_gives_no_switch() {
    assert!(events(&planted(1.2), 100, 1.0).is_empty());
}

#[test]
fn planted_barrier_response() {
    for gamma in [0.0, 1e-5] {
        let w = jumps::PlantedBarrier { base: GeneralizedProfile::new(BulkModel::planar(4, 1.0, 1.0).unwrap(), gamma), ..planted(1.6) };
        for cp in functional::interior_maxima(&w, 0.05, functional::DEFAULT_GRID).unwrap() {
            let rec = jumps::sensitivity(&w, &cp, SensitivityOptions::default()).unwrap();
            assert!(rec.dg_dr.abs() > 1e-6);
            assert!(rec.discrepancy_fd < 1e-3, "{rec:?}");
        }
    }
}
