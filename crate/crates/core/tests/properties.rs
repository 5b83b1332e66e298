use cgr_lab::criticality::{self, CgrGrid, ChainCoefficient};
use cgr_lab::fg;
use cgr_lab::functional::{
    self, effective_potential, find_critical_points, interior_maxima, CriticalKind, GeneralizedProfile,
};
use cgr_lab::surfaces::{self, SurfaceConfig, SurfaceSolver};
use cgr_lab::{BulkModel, Family};
use proptest::prelude::*;

fn planar() -> BulkModel {
    BulkModel::planar(4, 1.0, 1.0).unwrap()
}

fn profiles() -> Vec<GeneralizedProfile> {
    vec![
        GeneralizedProfile::new(planar(), 0.0),
        GeneralizedProfile::new(planar(), 1e-4),
        GeneralizedProfile::new(BulkModel::global(4, 1.0, 1.0).unwrap(), 0.0),
        GeneralizedProfile::new(BulkModel::planar(3, 1.0, 2.0).unwrap(), 1e-5),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn turning_point_sits_on_the_level(frac in -0.999f64..0.999, which in 0usize..4) {
        let w = profiles()[which];
        let top = interior_maxima(&w, 0.05 * w.model.r_h, functional::DEFAULT_GRID).unwrap()[0].level;
        let p = frac * top.sqrt();
        let r = surfaces::turning_point(&w, p).unwrap();
        prop_assert!((effective_potential(&w, r).unwrap() - p * p).abs() < 1e-10);
    }

    #[test]
    fn tortoise_is_additive(x in 0.0f64..1.0, y in 0.0f64..1.0, z in 0.0f64..1.0, outside in any::<bool>()) {
        let m = planar();
        let map = |u: f64| if outside { 1.05 + 8.0 * u } else { 0.05 + 0.9 * u };
        let mut v = [map(x), map(y), map(z)];
        v.sort_by(f64::total_cmp);
        let [a, b, c] = v;
        let lhs = m.tortoise(a, b).unwrap() + m.tortoise(b, c).unwrap();
        prop_assert!((lhs - m.tortoise(a, c).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn gauge_map_is_monotone(x in 1.01f64..50.0, y in 1.01f64..50.0) {
        prop_assume!((x - y).abs() > 1e-6);
        let m = BulkModel::planar(4, 1.0, 1.0).unwrap();
        let (a, b) = (fg::fg_gauge_map(&m, x).unwrap(), fg::fg_gauge_map(&m, y).unwrap());
        prop_assert!((x < y) == (a > b));
        prop_assert!((fg::fg_inverse(&m, a).unwrap() / x - 1.0).abs() < 1e-10);
    }

    #[test]
    fn collapse_vanishes_at_unit_lambda(mu in -3.0f64..3.0, nu in -3.0f64..3.0) {
        let eval = |r: f64, g: f64| Ok(r.powi(3) * (1.0 + g));
        let rep = criticality::scaling_collapse(eval, 0.7, 1e-3, &[1.0; 6], mu, nu).unwrap();
        prop_assert_eq!(rep.residual, 0.0);
        prop_assert_eq!(rep.dropped, 0);
    }

    #[test]
    fn cs_operator_is_linear(a in -5.0f64..5.0, b in -5.0f64..5.0, mu in -2.0f64..2.0, nu in -2.0f64..2.0, delta in 0.5f64..4.0) {
        let r: Vec<f64> = (0..9).map(|k| 1.5 + 0.05 * k as f64).collect();
        let g: Vec<f64> = (0..7).map(|k| 1e-4 + 1e-5 * k as f64).collect();
        let f1 = |r: f64, g: f64| r.powi(3) + 1e3 * g * r;
        let f2 = |r: f64, g: f64| (r * 2.0).sin() * (1.0 + g * g);
        let m = planar();
        let field = |grid: &CgrGrid| criticality::cs_residual_field(grid, &m, ChainCoefficient::Plain, mu, nu, delta).unwrap();
        let both = field(&CgrGrid::tabulate(r.clone(), g.clone(), |x, y| a * f1(x, y) + b * f2(x, y)));
        let one = field(&CgrGrid::tabulate(r.clone(), g.clone(), f1));
        let two = field(&CgrGrid::tabulate(r, g, f2));
        for i in 0..both.len() {
            for j in 0..both[i].len() {
                let expect = a * one[i][j] + b * two[i][j];
                prop_assert!((both[i][j] - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tiny_coupling_keeps_the_catalog(gamma in 0.0f64..1e-12) {
        // the wall minimum moves in like γ^{1/8}; the catalog is compared above it
        let base = find_critical_points(&GeneralizedProfile::new(planar(), 0.0), 0.2, 1.0 - 1e-12, functional::DEFAULT_GRID).unwrap();
        let cps = find_critical_points(&GeneralizedProfile::new(planar(), gamma), 0.2, 1.0 - 1e-12, functional::DEFAULT_GRID).unwrap();
        prop_assert_eq!(cps.len(), base.len());
        for (a, b) in cps.iter().zip(&base) {
            prop_assert_eq!(a.kind, b.kind);
            prop_assert!((a.r_i - b.r_i).abs() < 1e-6);
        }
    }

    #[test]
    fn growth_rate_is_odd(tau in 0.1f64..8.0, which in 0usize..2) {
        let w = profiles()[which];
        let s = SurfaceSolver::new(&w, SurfaceConfig::default()).unwrap();
        let (p, q) = (s.dominant_at(tau).unwrap(), s.dominant_at(-tau).unwrap());
        prop_assert_eq!(p.cgr, -q.cgr);
        prop_assert_eq!(p.complexity, q.complexity);
    }
}

#[test]
fn critical_points_match_a_dense_scan() {
    for w in profiles() {
        let rh = w.model.r_h;
        let (lo, hi, n) = (0.05 * rh, rh * (1.0 - 1e-9), functional::DEFAULT_GRID);
        let cps = find_critical_points(&w, lo, hi, n).unwrap();
        let fine = 10 * n;
        let h = (hi - lo) / fine as f64;
        let u: Vec<f64> = (0..=fine).map(|k| effective_potential(&w, lo + h * k as f64).unwrap()).collect();
        for cp in &cps {
            // extremum of the dense samples within a few coarse cells
            let k0 = ((cp.r_i - lo) / h).round() as usize;
            let (a, b) = (k0.saturating_sub(40), (k0 + 40).min(fine));
            let pick = |better: fn(f64, f64) -> bool| {
                (a..=b).fold(a, |best, k| if better(u[k], u[best]) { k } else { best })
            };
            let k = match cp.kind {
                CriticalKind::LocalMax => pick(|x, y| x > y),
                CriticalKind::LocalMin => pick(|x, y| x < y),
            };
            let r_scan = lo + h * k as f64;
            assert!((r_scan - cp.r_i).abs() <= h, "{w:?}: {} vs scan {r_scan}", cp.r_i);
            if cp.kind == CriticalKind::LocalMax {
                assert!(u[a..=b].iter().all(|&x| x <= cp.level + 1e-15));
            }
        }
    }
}

#[test]
fn weyl_tail_is_a_pure_power() {
    for d in 3..=5 {
        let m = BulkModel::new(Family::PlanarSads, d, 1.0, 1.7).unwrap();
        let vals: Vec<f64> = functional::log_grid(5.0 * m.r_h, 50.0 * m.r_h, 30)
            .into_iter()
            .map(|r| m.weyl_squared(r).unwrap() * r.powi(2 * d as i32))
            .collect();
        let (lo, hi) = vals.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        assert!((hi - lo) / hi < 1e-6);
    }
}

#[test]
fn horizon_is_a_root() {
    for family in [Family::PlanarSads, Family::GlobalSads] {
        for d in 3..=5 {
            for r_h in [0.3, 1.0, 3.0] {
                let m = BulkModel::new(family, d, 1.0, r_h).unwrap();
                assert!(m.blackening(r_h).unwrap().abs() < 1e-12);
            }
        }
    }
}

#[test]
fn fg_series_reproduces_samples() {
    let m = planar();
    let s = fg::fg_series_fit(&m).unwrap();
    for rho in functional::log_grid(s.window.0, s.window.1, 25) {
        let exact = fg::boundary_components(&m, rho).unwrap();
        let approx = s.evaluate(rho);
        for (a, b) in approx.iter().zip(&exact) {
            assert!((a - b).abs() <= s.fit_residual * (1.0 + 1e-9) + 1e-15, "rho {rho}: {a} vs {b}");
        }
    }
}

#[test]
fn g4_scales_as_fourth_power() {
    let rs = [0.7, 1.0, 1.9];
    let g4: Vec<f64> = rs.iter().map(|&r| fg::fg_series_fit(&BulkModel::planar(4, 1.0, r).unwrap()).unwrap().g4[0]).collect();
    for i in 1..3 {
        let expect = (rs[i] / rs[0]).powi(4);
        assert!((g4[i] / g4[0] / expect - 1.0).abs() < 1e-3);
    }
}
