//! Near-boundary (Fefferman-Graham) data of the bulk metric.
//!
//! The radial coordinate is traded for ρ with `ds² = (L²/ρ²)(dρ² + g_ij dx^i dx^j)`,
//! the boundary metric components are sampled in ρ and fitted by an even
//! polynomial. Boundary curvature comes from the finite-difference pipeline.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::curvature::{self, christoffel, curvature_at, DiagonalMetric, StaticBoundary, StepPolicy};
use crate::error::{LabError, Result};
use crate::geometry::{BulkModel, Family};
use crate::io::{num, Table};
use crate::quadrature::Integrator;

/// Angles at which coordinate components are reported. Any point away from
/// the poles works; all families are homogeneous.
pub const BASE_ANGLES: [f64; 4] = [1.1, 0.93, 0.71, 0.52];

const FIT_POINTS: usize = 40;
const MAX_CONDITION: f64 = 1e12;

/// Fitted boundary expansion, as diagonal coordinate components `(t, x₁, …)`
/// at [`BASE_ANGLES`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FgSeries {
    pub g0: Vec<f64>,
    pub g2: Vec<f64>,
    pub g4: Vec<f64>,
    pub fit_residual: f64,
    pub condition: f64,
    /// sampled window in units of L
    pub window: (f64, f64),
}

impl FgSeries {
    /// Truncated series at `ρ`.
    pub fn evaluate(&self, rho: f64) -> Vec<f64> {
        let r2 = rho * rho;
        (0..self.g0.len()).map(|i| self.g0[i] + r2 * self.g2[i] + r2 * r2 * self.g4[i]).collect()
    }
}

/// Fit controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FgOptions {
    /// ρ/L window
    pub window: (f64, f64),
    pub points: usize,
    /// extra even orders beyond ρ⁴ absorbed by the fit and discarded
    pub nuisance_orders: usize,
}

impl Default for FgOptions {
    fn default() -> Self {
        Self { window: (1e-3, 1e-1), points: FIT_POINTS, nuisance_orders: 2 }
    }
}

fn log_deficit_integrand(model: &BulkModel, s: f64) -> f64 {
    // 1/(L√f) - 1/s, rewritten so the leading terms cancel analytically
    let l = model.l;
    let sf = model.f(s).sqrt();
    l * l * model.f_deficit(s) / (s * l * sf * (s + l * sf))
}

fn check_exterior(model: &BulkModel, r: f64) -> Result<()> {
    if !(r.is_finite() && r > model.r_h) {
        return Err(LabError::Domain(format!("FG chart needs r > r_h = {}, got {r}", model.r_h)));
    }
    Ok(())
}

/// `ln(ρ r / L²)`, which tends to zero at the boundary.
fn log_rho_offset(model: &BulkModel, r: f64) -> Result<f64> {
    let est = Integrator::new(1e-16, 1e-13).integrate_to_infinity(|s| log_deficit_integrand(model, s), r)?;
    Ok(est.value)
}

/// FG radial coordinate ρ(r), from `dρ/ρ = -dr/(L√f)` with `ρ → L²/r`.
pub fn fg_gauge_map(model: &BulkModel, r: f64) -> Result<f64> {
    check_exterior(model, r)?;
    Ok(model.l * model.l / r * log_rho_offset(model, r)?.exp())
}

/// Inverse of [`fg_gauge_map`], by Newton steps on `ln ρ`.
pub fn fg_inverse(model: &BulkModel, rho: f64) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(LabError::Domain(format!("rho must be positive, got {rho}")));
    }
    let l = model.l;
    let target = rho.ln();
    let mut r = l * l / rho;
    let mut best = (f64::INFINITY, r);
    for _ in 0..60 {
        let r_safe = r.max(model.r_h * (1.0 + 1e-9));
        let resid = (l * l / r_safe).ln() + log_rho_offset(model, r_safe)? - target;
        if resid.abs() < best.0 {
            best = (resid.abs(), r_safe);
        }
        let slope = -1.0 / (l * model.f(r_safe).sqrt());
        let next = r_safe - resid / slope;
        let next = if next <= model.r_h { 0.5 * (r_safe + model.r_h) } else { next };
        if (next - r_safe).abs() <= 1e-14 * r_safe {
            return Ok(next);
        }
        r = next;
    }
    // quadrature noise can stall the last digit
    if best.0 < 1e-13 {
        return Ok(best.1);
    }
    Err(LabError::Root(format!("FG inverse did not converge at rho = {rho}")))
}

/// Angular factors of the boundary metric at [`BASE_ANGLES`].
fn angular_factors(model: &BulkModel) -> Vec<f64> {
    let k = model.d as usize - 1;
    match model.family {
        Family::PlanarSads => vec![1.0; k],
        Family::GlobalSads => curvature::sphere_components(1.0, &BASE_ANGLES[..k]),
    }
}

/// `g_ij(ρ) = (ρ²/L²) G_ij` as diagonal components.
pub fn boundary_components(model: &BulkModel, rho: f64) -> Result<Vec<f64>> {
    let r = fg_inverse(model, rho)?;
    let l2 = model.l * model.l;
    let w = rho * rho / l2;
    let spatial = match model.family {
        Family::PlanarSads => w * r * r / l2,
        Family::GlobalSads => w * r * r,
    };
    let mut g = vec![-w * model.f(r)];
    g.extend(angular_factors(model).into_iter().map(|a| spatial * a));
    Ok(g)
}

/// Least-squares fit of the even series through ρ⁴. Two higher even orders
/// are fitted as nuisance terms; without them the ρ⁸ part of `g_tt` leaks
/// into `g4` at the 1e-5 level.
pub fn fg_series_fit(model: &BulkModel) -> Result<FgSeries> {
    fg_series_fit_with(model, FgOptions::default())
}

pub fn fg_series_fit_with(model: &BulkModel, opts: FgOptions) -> Result<FgSeries> {
    let (lo, hi) = opts.window;
    if !(lo > 0.0 && hi > lo) || opts.points < 3 + opts.nuisance_orders {
        return Err(LabError::Config("FG window must be positive and hold enough points".into()));
    }
    let l = model.l;
    let rhos = crate::functional::log_grid(lo * l, hi * l, opts.points);
    let samples: Vec<Vec<f64>> = rhos.iter().map(|&rho| boundary_components(model, rho)).collect::<Result<_>>()?;

    // scaled variable keeps the columns O(1)
    let rho_max = hi * l;
    let cols = 3 + opts.nuisance_orders;
    let design = DMatrix::from_fn(rhos.len(), cols, |i, j| (rhos[i] / rho_max).powi(2 * j as i32));
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(LabError::Fit(format!("FG design matrix condition number {condition:.3e}")));
    }

    let ncomp = samples[0].len();
    let (mut g0, mut g2, mut g4) = (vec![0.0; ncomp], vec![0.0; ncomp], vec![0.0; ncomp]);
    let mut fit_residual: f64 = 0.0;
    for c in 0..ncomp {
        let y = DVector::from_iterator(rhos.len(), samples.iter().map(|s| s[c]));
        let coef = svd.solve(&y, 1e-15).map_err(|e| LabError::Fit(e.to_string()))?;
        g0[c] = coef[0];
        g2[c] = coef[1] / rho_max.powi(2);
        g4[c] = coef[2] / rho_max.powi(4);
        // residual against the physical truncation, nuisance terms excluded
        for (i, &rho) in rhos.iter().enumerate() {
            let r2 = rho * rho;
            let approx = g0[c] + r2 * g2[c] + r2 * r2 * g4[c];
            fit_residual = fit_residual.max((approx - y[i]).abs());
        }
    }
    Ok(FgSeries { g0, g2, g4, fit_residual, condition, window: opts.window })
}

/// Trace normalization of the Schouten tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchoutenNorm {
    /// `½(R_ij - R g_ij / 6)`
    Literal,
    /// `½(R_ij - R g_ij / (2(d-1)))`
    General,
}

fn boundary_metric(model: &BulkModel) -> StaticBoundary {
    StaticBoundary {
        spatial_dim: model.d as usize - 1,
        sphere_radius: match model.family {
            Family::PlanarSads => None,
            Family::GlobalSads => Some(model.l),
        },
    }
}

fn base_point(b: &StaticBoundary) -> Vec<f64> {
    let mut x = vec![0.0];
    x.extend_from_slice(&BASE_ANGLES[..b.spatial_dim]);
    x
}

/// Schouten tensor components of a static boundary metric at [`BASE_ANGLES`].
pub fn schouten_tensor(boundary: &StaticBoundary, norm: SchoutenNorm) -> Result<Vec<f64>> {
    if boundary.spatial_dim < 2 || boundary.spatial_dim > BASE_ANGLES.len() {
        return Err(LabError::Domain(format!("unsupported boundary dimension {}", boundary.spatial_dim + 1)));
    }
    if let Some(a) = boundary.sphere_radius {
        if !(a.is_finite() && a > 0.0) {
            return Err(LabError::Domain(format!("sphere radius must be positive, got {a}")));
        }
    }
    let x = base_point(boundary);
    let c = curvature_at(boundary, &x, StepPolicy::default())?;
    let d = boundary.dim() as f64;
    let denom = match norm {
        SchoutenNorm::Literal => 6.0,
        SchoutenNorm::General => 2.0 * (d - 1.0),
    };
    Ok((0..boundary.dim()).map(|i| 0.5 * (c.ricci(i, i) - c.ricci_scalar * c.metric[i] / denom)).collect())
}

/// Boundary scalars entering the Weyl-squared decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub stress: Vec<f64>,
    pub trace: f64,
    pub schouten: Vec<f64>,
    pub weyl_anomaly_sq: f64,
    pub shear_term: f64,
    pub div_term: f64,
}

impl BoundaryData {
    pub fn scalar_sum(&self) -> f64 {
        self.weyl_anomaly_sq + self.shear_term + self.div_term
    }
}

/// Static homogeneous tensor field `T = diag(T_tt, T_Ω · sphere)` on the boundary.
struct StressField {
    boundary: StaticBoundary,
    time: f64,
    /// coefficient of the unit-normalized spatial metric
    space: f64,
}

impl StressField {
    fn components(&self, x: &[f64]) -> Vec<f64> {
        let mut t = vec![self.time];
        match self.boundary.sphere_radius {
            None => t.extend(std::iter::repeat_n(self.space, self.boundary.spatial_dim)),
            Some(_) => t.extend(curvature::sphere_components(self.space, &x[1..])),
        }
        t
    }
}

/// `(∇_i T_jk)(∇^i T^jk)` by central differences and the numerical connection.
fn divergence_square(field: &StressField, x: &[f64]) -> f64 {
    let b = &field.boundary;
    let n = b.dim();
    let policy = StepPolicy::default();
    let gamma = christoffel(b, x, policy);
    let g = b.components(x);
    let t = field.components(x);
    let mut total = 0.0;
    for i in 0..n {
        let h = b.step(x, i, policy.rel);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += h;
        xm[i] -= h;
        let tp = field.components(&xp);
        let tm = field.components(&xm);
        for j in 0..n {
            for k in 0..n {
                let dt = if j == k { (tp[j] - tm[j]) / (2.0 * h) } else { 0.0 };
                // T is diagonal: Γ^l_ij T_lk keeps only l = k
                let cov = dt - gamma[(k * n + i) * n + j] * t[k] - gamma[(j * n + i) * n + k] * t[j];
                total += cov * cov / (g[i] * g[j] * g[k]);
            }
        }
    }
    total
}

/// Boundary data with the stress tensor taken as the `ρ⁴` coefficient.
pub fn boundary_data(model: &BulkModel, series: &FgSeries, norm: SchoutenNorm) -> Result<BoundaryData> {
    let bm = boundary_metric(model);
    let g0 = &series.g0;
    let stress = series.g4.clone();
    let trace: f64 = stress.iter().zip(g0).map(|(t, g)| t / g).sum();
    let shear_term = stress
        .iter()
        .zip(g0)
        .map(|(t, g)| {
            let s = t - g * trace / 4.0;
            s * s / (g * g)
        })
        .sum();
    let x = base_point(&bm);
    let weyl_anomaly_sq = curvature_at(&bm, &x, StepPolicy::default())?.weyl_squared();
    let factors = angular_factors(model);
    let field = StressField { boundary: bm, time: stress[0], space: stress[1] / factors[0] };
    let div_term = divergence_square(&field, &x);
    Ok(BoundaryData {
        stress,
        trace,
        schouten: schouten_tensor(&bm, norm)?,
        weyl_anomaly_sq,
        shear_term,
        div_term,
    })
}

/// Leading near-boundary coefficient `lim r^{2d} C²(r)`, from a fit in `1/r²`
/// over `r ∈ [20, 50] r_h`.
pub fn weyl_leading_coefficient(model: &BulkModel) -> Result<f64> {
    if model.is_vacuum() {
        return Ok(0.0);
    }
    let two_d = 2 * model.d as i32;
    let rs = crate::functional::log_grid(20.0 * model.r_h, 50.0 * model.r_h, 20);
    let design = DMatrix::from_fn(rs.len(), 2, |i, j| if j == 0 { 1.0 } else { 1.0 / (rs[i] * rs[i]) });
    let y = DVector::from_iterator(rs.len(), rs.iter().map(|&r| r.powi(two_d) * model.c2(r)));
    let coef = design
        .svd(true, true)
        .solve(&y, 1e-15)
        .map_err(|e| LabError::Fit(e.to_string()))?;
    Ok(coef[0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub model: BulkModel,
    pub g0: Vec<f64>,
    pub g2: Vec<f64>,
    pub g4: Vec<f64>,
    pub fit_residual: f64,
    pub c_inf: f64,
    pub s_components: BoundaryData,
    pub ratio: Option<f64>,
    /// both sides vanish
    pub vacuous: bool,
}

pub fn weyl_decomposition_check(model: &BulkModel) -> Result<DecompositionReport> {
    let series = fg_series_fit(model)?;
    let data = boundary_data(model, &series, SchoutenNorm::Literal)?;
    let c_inf = weyl_leading_coefficient(model)?;
    let s = data.scalar_sum();
    let tiny = 1e-12;
    let (ratio, vacuous) = if s.abs() <= tiny && c_inf.abs() <= tiny {
        (None, true)
    } else if s.abs() <= tiny {
        return Err(LabError::SelfCheck(format!("boundary scalar vanishes while c_inf = {c_inf:.6e}")));
    } else {
        (Some(c_inf / s), false)
    };
    Ok(DecompositionReport {
        model: *model,
        g0: series.g0,
        g2: series.g2,
        g4: series.g4,
        fit_residual: series.fit_residual,
        c_inf,
        s_components: data,
        ratio,
        vacuous,
    })
}

/// Ratio sweep across models; `spread` is `(max - min) / |mean|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstancyReport {
    pub rows: Vec<DecompositionReport>,
    pub spread: f64,
}

impl ConstancyReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["r_h", "c_inf", "S", "ratio"]);
        for row in &self.rows {
            t.push(vec![
                num(row.model.r_h),
                num(row.c_inf),
                num(row.s_components.scalar_sum()),
                row.ratio.map(num).unwrap_or_default(),
            ]);
        }
        t
    }
}

pub fn ratio_constancy(models: &[BulkModel]) -> Result<ConstancyReport> {
    use rayon::prelude::*;
    let rows: Vec<DecompositionReport> = models.par_iter().map(weyl_decomposition_check).collect::<Result<_>>()?;
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let spread = if ratios.len() < 2 {
        0.0
    } else {
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        (max - min) / mean.abs()
    };
    Ok(ConstancyReport { rows, spread })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planar(rh: f64) -> BulkModel {
        BulkModel::planar(4, 1.0, rh).unwrap()
    }

    #[test]
    fn vacuum_map_is_exact() {
        let m = BulkModel::vacuum(Family::PlanarSads, 4, 1.0).unwrap();
        for r in [2.0, 5.0, 10.0] {
            assert!((fg_gauge_map(&m, r).unwrap() - 1.0 / r).abs() < 1e-10);
        }
    }

    #[test]
    fn map_rejects_interior() {
        assert!(matches!(fg_gauge_map(&planar(1.0), 0.9), Err(LabError::Domain(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let m = BulkModel::global(4, 1.0, 0.7).unwrap();
        for rho in [1e-3, 3e-2, 0.1, 0.4] {
            let r = fg_inverse(&m, rho).unwrap();
            assert!((fg_gauge_map(&m, r).unwrap() / rho - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn planar_black_brane_closed_form() {
        // g_tt = -(1-u)²/(1+u), g_xx = 1+u with u = r_h⁴ρ⁴/4
        let m = planar(1.3);
        for rho in [0.05f64, 0.3, 0.6] {
            let u = 1.3f64.powi(4) * rho.powi(4) / 4.0;
            let g = boundary_components(&m, rho).unwrap();
            assert!((g[0] + (1.0 - u).powi(2) / (1.0 + u)).abs() < 1e-12, "{}", g[0]);
            assert!((g[1] - 1.0 - u).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_schouten_vanishes() {
        let b = StaticBoundary { spatial_dim: 3, sphere_radius: None };
        assert!(schouten_tensor(&b, SchoutenNorm::Literal).unwrap().iter().all(|p| *p == 0.0));
    }

    #[test]
    fn einstein_universe_schouten() {
        let b = StaticBoundary { spatial_dim: 3, sphere_radius: Some(1.0) };
        let p = schouten_tensor(&b, SchoutenNorm::Literal).unwrap();
        let g = b.components(&base_point(&b));
        for i in 0..4 {
            assert!((p[i] / g[i] - if i == 0 { -0.5 } else { 0.5 }).abs() < 1e-8, "{i}: {}", p[i] / g[i]);
        }
    }

    #[test]
    fn general_norm_differs_off_four_dimensions() {
        let b = StaticBoundary { spatial_dim: 2, sphere_radius: Some(1.0) };
        let lit = schouten_tensor(&b, SchoutenNorm::Literal).unwrap();
        let gen = schouten_tensor(&b, SchoutenNorm::General).unwrap();
        assert!((lit[0] - 1.0 / 6.0).abs() < 1e-8 && (gen[0] - 0.25).abs() < 1e-8);
    }

    #[test]
    fn unsupported_boundary() {
        let b = StaticBoundary { spatial_dim: 1, sphere_radius: None };
        assert!(schouten_tensor(&b, SchoutenNorm::General).is_err());
    }

    #[test]
    fn planar_stress_is_traceless_and_sheared() {
        let m = planar(1.0);
        let s = fg_series_fit(&m).unwrap();
        let data = boundary_data(&m, &s, SchoutenNorm::Literal).unwrap();
        let norm = data.stress.iter().map(|t| t * t).sum::<f64>().sqrt();
        assert!(data.trace.abs() < 1e-6 * norm);
        assert!(data.div_term < 1e-8 * data.shear_term);
        assert!(data.weyl_anomaly_sq.abs() < 1e-8 * data.shear_term);
    }

    #[test]
    fn vacuum_is_vacuous() {
        let m = BulkModel::vacuum(Family::PlanarSads, 4, 1.0).unwrap();
        let rep = weyl_decomposition_check(&m).unwrap();
        assert!(rep.vacuous && rep.ratio.is_none());
    }
}
