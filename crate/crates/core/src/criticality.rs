//! Scaling behaviour of the growth rate near barrier radii: power-law fits,
//! scaling collapse under `(r, γ) → (λ^μ r, λ^ν γ)` and the first-order
//! scaling operator residual.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::functional::{effective_potential, GammaFamily, RadialWeight};
use crate::geometry::BulkModel;
use crate::io::{num, Table};

/// `√U(r)`, the leading-order growth rate on the approach to a barrier.
pub fn local_cgr_model<W: RadialWeight + ?Sized>(w: &W, r: f64) -> Result<f64> {
    let u = effective_potential(w, r)?;
    if u < 0.0 {
        return Err(LabError::Domain(format!("U({r}) = {u:.6e} is negative")));
    }
    Ok(u.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ModelForm {
    /// `A (r - r_i)^Δ + α`
    #[default]
    PowerPlusConst,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalFit {
    pub r_i: f64,
    pub alpha_const: f64,
    pub amplitude: f64,
    pub delta_hat: f64,
    pub mu: f64,
    pub nu_hat: Option<f64>,
    pub window: (f64, f64),
    pub fit_r2: f64,
    /// points actually used
    pub used: usize,
}

impl CriticalFit {
    pub fn predict(&self, r: f64) -> f64 {
        self.amplitude * (r - self.r_i).powf(self.delta_hat) + self.alpha_const
    }

    /// `|Δ̂ - dμ|`.
    pub fn relation_gap(&self, d: u32) -> f64 {
        (self.delta_hat - d as f64 * self.mu).abs()
    }
}

const MIN_SAMPLES: usize = 10;
const MIN_OFFSET: f64 = 1e-6;
const REFINE_ITERS: usize = 100;

fn linear_regression(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Relative Gauss-Newton refinement of `(A, Δ, α)` with step halving.
fn refine(pts: &[(f64, f64)], mut p: [f64; 3]) -> [f64; 3] {
    let cost = |p: &[f64; 3]| -> f64 {
        pts.iter()
            .map(|&(x, v)| {
                let e = (p[0] * x.powf(p[1]) + p[2] - v) / v.abs().max(f64::MIN_POSITIVE);
                e * e
            })
            .sum()
    };
    let mut c = cost(&p);
    for _ in 0..REFINE_ITERS {
        let mut jtj = nalgebra::Matrix3::<f64>::zeros();
        let mut jtr = nalgebra::Vector3::<f64>::zeros();
        for &(x, v) in pts {
            let s = 1.0 / v.abs().max(f64::MIN_POSITIVE);
            let xp = x.powf(p[1]);
            let j = nalgebra::Vector3::new(xp * s, p[0] * xp * x.ln() * s, s);
            let r = (p[0] * xp + p[2] - v) * s;
            jtj += j * j.transpose();
            jtr += j * r;
        }
        let Some(step) = jtj.lu().solve(&jtr) else { break };
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-6 {
            let trial = [p[0] - t * step[0], p[1] - t * step[1], p[2] - t * step[2]];
            let ct = cost(&trial);
            if ct.is_finite() && ct < c {
                p = trial;
                improved = c - ct > 1e-15 * c;
                c = ct;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    p
}

/// Fits `value = A (r - r_i)^Δ + α` on samples with `r` in `window`.
///
/// α starts at the value nearest `r_i`, `(A, Δ)` from a log-log regression of
/// the remaining points, then all three are refined together.
pub fn fit_exponent(samples: &[(f64, f64)], r_i: f64, form: ModelForm, window: (f64, f64)) -> Result<CriticalFit> {
    let ModelForm::PowerPlusConst = form;
    let mut pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(r, v)| *r >= window.0 && *r <= window.1 && r - r_i > MIN_OFFSET && v.is_finite())
        .map(|&(r, v)| (r - r_i, v))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    loop {
        if pts.len() < MIN_SAMPLES {
            return Err(LabError::Fit(format!("{} samples in the window, need {MIN_SAMPLES}", pts.len())));
        }
        let alpha = pts[0].1;
        let rest = &pts[1..];
        let increasing = rest.iter().all(|(_, v)| v - alpha > 0.0);
        let decreasing = rest.iter().all(|(_, v)| v - alpha < 0.0);
        if !(increasing || decreasing) {
            // drop the point nearest r_i and retry
            pts.remove(0);
            continue;
        }
        let sign = if increasing { 1.0 } else { -1.0 };
        let lx: Vec<f64> = rest.iter().map(|(x, _)| x.ln()).collect();
        let ly: Vec<f64> = rest.iter().map(|(_, v)| (sign * (v - alpha)).ln()).collect();
        let (delta0, logamp) = linear_regression(&lx, &ly);
        let p = refine(&pts, [sign * logamp.exp(), delta0, alpha]);
        if !p.iter().all(|v| v.is_finite()) {
            return Err(LabError::Fit("refinement diverged".into()));
        }
        let mean = pts.iter().map(|(_, v)| v).sum::<f64>() / pts.len() as f64;
        let ss_tot: f64 = pts.iter().map(|(_, v)| (v - mean).powi(2)).sum();
        let ss_res: f64 = pts.iter().map(|&(x, v)| (p[0] * x.powf(p[1]) + p[2] - v).powi(2)).sum();
        let fit_r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
        return Ok(CriticalFit {
            r_i,
            alpha_const: p[2],
            amplitude: p[0],
            delta_hat: p[1],
            mu: 1.0,
            nu_hat: None,
            window,
            fit_r2,
            used: pts.len(),
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapseRow {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    /// NaN when the point was dropped
    pub cgr_scaled: f64,
    /// `ln(Ċ(λ)/Ċ(1)) / ln λ`, NaN at λ = 1
    pub log_slope: f64,
    pub dropped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub rows: Vec<CollapseRow>,
    /// slope of `ln(Ċ(λ)/Ċ(1))` against `ln λ`, through the origin
    pub delta_collapse: f64,
    /// RMS deviation from that line
    pub residual: f64,
    pub dropped: usize,
}

impl CollapseReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["lambda", "mu", "nu", "cgr_scaled", "log_slope"]);
        for row in &self.rows {
            t.push(vec![num(row.lambda), num(row.mu), num(row.nu), num(row.cgr_scaled), num(row.log_slope)]);
        }
        t
    }
}

/// Regresses `ln Ċ(λ^μ r_i, λ^ν γ)` on `ln λ`. `eval(r, γ)` errors mark points
/// outside the evaluator's domain; those are dropped and counted.
pub fn scaling_collapse<E>(eval: E, r_i: f64, gamma: f64, lambdas: &[f64], mu: f64, nu: f64) -> Result<CollapseReport>
where
    E: Fn(f64, f64) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    if lambdas.len() < 5 || lambdas.iter().any(|&l| !(0.5..=2.0).contains(&l)) {
        return Err(LabError::Config("scaling collapse needs at least 5 lambdas in [0.5, 2]".into()));
    }
    let base = eval(r_i, gamma)?;
    if !(base > 0.0) {
        return Err(LabError::Domain(format!("growth rate at the reference point is {base}")));
    }
    let rows: Vec<CollapseRow> = lambdas
        .par_iter()
        .map(|&lambda| {
            let value = eval(lambda.powf(mu) * r_i, lambda.powf(nu) * gamma).ok().filter(|v| *v > 0.0 && v.is_finite());
            let ll = lambda.ln();
            match value {
                Some(v) => CollapseRow {
                    lambda,
                    mu,
                    nu,
                    cgr_scaled: v,
                    log_slope: if ll == 0.0 { f64::NAN } else { (v / base).ln() / ll },
                    dropped: false,
                },
                None => CollapseRow { lambda, mu, nu, cgr_scaled: f64::NAN, log_slope: f64::NAN, dropped: true },
            }
        })
        .collect();
    let kept: Vec<(f64, f64)> =
        rows.iter().filter(|r| !r.dropped).map(|r| (r.lambda.ln(), (r.cgr_scaled / base).ln())).collect();
    let sxx: f64 = kept.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = kept.iter().map(|(x, y)| x * y).sum();
    let delta_collapse = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let residual = if kept.is_empty() {
        0.0
    } else {
        (kept.iter().map(|(x, y)| (y - delta_collapse * x).powi(2)).sum::<f64>() / kept.len() as f64).sqrt()
    };
    let dropped = rows.iter().filter(|r| r.dropped).count();
    Ok(CollapseReport { rows, delta_collapse, residual, dropped })
}

/// Growth rate evaluator for a weight family: `(r, γ) ↦ √U_γ(r)`.
pub fn family_evaluator<F: GammaFamily>(family: &F) -> impl Fn(f64, f64) -> Result<f64> + Sync + '_ {
    move |r, gamma| local_cgr_model(&family.with_gamma(gamma), r)
}

/// Coefficient of `νγ ∂_r` in the scaling operator. The two forms differ by
/// the `r^{2d}` factor from the change of radial variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ChainCoefficient {
    /// `2 g⁽⁰⁾_tt C²`
    #[default]
    Plain,
    /// `2 r^{2d} g⁽⁰⁾_tt C²`
    RadialWeighted,
}

impl ChainCoefficient {
    pub fn evaluate(self, model: &BulkModel, r: f64) -> f64 {
        let l = model.l;
        let g_tt = -model.f(r) * l * l / (r * r);
        let base = 2.0 * g_tt * model.c2(r);
        match self {
            ChainCoefficient::Plain => base,
            ChainCoefficient::RadialWeighted => base * r.powi(2 * model.d as i32),
        }
    }
}

/// `Ċ` sampled on a tensor grid, `values[i][j] = Ċ(r[i], γ[j])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CgrGrid {
    pub r: Vec<f64>,
    pub gamma: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl CgrGrid {
    pub fn tabulate<E: Fn(f64, f64) -> f64>(r: Vec<f64>, gamma: Vec<f64>, eval: E) -> Self {
        let values = r.iter().map(|&ri| gamma.iter().map(|&g| eval(ri, g)).collect()).collect();
        Self { r, gamma, values }
    }
}

fn uniform_step(axis: &[f64], name: &str) -> Result<f64> {
    if axis.len() < 5 {
        return Err(LabError::Stencil(format!("{name} axis has {} points, need 5", axis.len())));
    }
    let h = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
    let uniform = axis.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
    if !(uniform && h > 0.0) {
        return Err(LabError::Stencil(format!("{name} axis must be increasing and uniformly spaced")));
    }
    Ok(h)
}

/// Central difference with one Richardson level (five-point stencil).
fn stencil(fm2: f64, fm1: f64, fp1: f64, fp2: f64, h: f64) -> f64 {
    let d1 = (fp1 - fm1) / (2.0 * h);
    let d2 = (fp2 - fm2) / (4.0 * h);
    (4.0 * d1 - d2) / 3.0
}

/// Operator `[(c(r) ν γ - μ r) ∂_r - ν γ ∂_γ + Δ] Ċ` at interior points.
/// A single-point γ axis is allowed when `ν = 0`.
pub fn cs_residual_field(
    grid: &CgrGrid,
    model: &BulkModel,
    chain: ChainCoefficient,
    mu: f64,
    nu: f64,
    delta: f64,
) -> Result<Vec<Vec<f64>>> {
    let hr = uniform_step(&grid.r, "r")?;
    let gamma_free = nu == 0.0;
    let hg = if gamma_free && grid.gamma.len() < 5 { None } else { Some(uniform_step(&grid.gamma, "gamma")?) };
    let v = &grid.values;
    let (g_lo, g_hi) = if hg.is_some() { (2, grid.gamma.len() - 2) } else { (0, grid.gamma.len()) };
    let mut out = Vec::new();
    for i in 2..grid.r.len() - 2 {
        let r = grid.r[i];
        let c = chain.evaluate(model, r);
        let mut row = Vec::new();
        for j in g_lo..g_hi {
            let g = grid.gamma[j];
            let dr = stencil(v[i - 2][j], v[i - 1][j], v[i + 1][j], v[i + 2][j], hr);
            let dg = match hg {
                Some(h) => stencil(v[i][j - 2], v[i][j - 1], v[i][j + 1], v[i][j + 2], h),
                None => 0.0,
            };
            row.push((c * nu * g - mu * r) * dr - nu * g * dg + delta * v[i][j]);
        }
        out.push(row);
    }
    Ok(out)
}

/// Max-norm of [`cs_residual_field`] over `max |Δ Ċ|` at the same points.
pub fn cs_residual(
    grid: &CgrGrid,
    model: &BulkModel,
    chain: ChainCoefficient,
    mu: f64,
    nu: f64,
    delta: f64,
) -> Result<f64> {
    let field = cs_residual_field(grid, model, chain, mu, nu, delta)?;
    let num = field.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    let gamma_skip = if field.first().map_or(0, |r| r.len()) == grid.gamma.len() { 0 } else { 2 };
    let mut den = 0.0f64;
    for i in 2..grid.r.len() - 2 {
        for j in gamma_skip..grid.gamma.len() - gamma_skip {
            den = den.max((delta * grid.values[i][j]).abs());
        }
    }
    if den == 0.0 {
        return Err(LabError::Numerical("normalization max |Δ Ċ| vanishes".into()));
    }
    Ok(num / den)
}
