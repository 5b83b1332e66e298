//! Curvature-weighted volume functional: the weight `a(r)`, the effective
//! potential `U(r) = -f(r) a(r)² r^{2(d-1)}` and its critical points.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::geometry::{BulkModel, Family};
use crate::io::{num, Table};
use crate::roots;

pub const TOL_GRAD: f64 = 1e-10;
pub const DEFAULT_GRID: usize = 4096;

/// A radial weight on a bulk geometry. Everything downstream (turning points,
/// boundary time, complexity, jumps) is written against this trait, so test
/// weights with a planted potential shape plug in unchanged.
pub trait RadialWeight: Sync {
    fn model(&self) -> &BulkModel;

    /// `a(r)`.
    fn weight(&self, r: f64) -> f64;

    /// `a'(r)`.
    fn weight_derivative(&self, r: f64) -> f64 {
        let h = 1e-6 * r;
        (self.weight(r + h) - self.weight(r - h)) / (2.0 * h)
    }
}

/// A weight family indexed by a scalar coupling.
pub trait GammaFamily: RadialWeight + Sized {
    fn gamma(&self) -> f64;
    fn with_gamma(&self, gamma: f64) -> Self;
    /// `∂a/∂γ` at fixed `r`.
    fn weight_gamma_derivative(&self, r: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WeightLaw {
    /// `a = 1 + γ L⁴ C²`
    #[default]
    Linear,
    /// `a² = 1 + γ² L⁸ C⁴`, the large-γ form
    Squared,
}

impl std::str::FromStr for WeightLaw {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(WeightLaw::Linear),
            "squared" => Ok(WeightLaw::Squared),
            other => Err(LabError::Config(format!("unknown weight law '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedProfile {
    pub gamma: f64,
    pub model: BulkModel,
    #[serde(default)]
    pub law: WeightLaw,
}

impl GeneralizedProfile {
    pub fn new(model: BulkModel, gamma: f64) -> Self {
        Self { gamma, model, law: WeightLaw::Linear }
    }

    pub fn squared(model: BulkModel, gamma: f64) -> Self {
        Self { gamma, model, law: WeightLaw::Squared }
    }

    /// `γ L⁴ C²(r)`.
    fn x(&self, r: f64) -> f64 {
        self.gamma * self.model.l.powi(4) * self.model.c2(r)
    }
}

impl RadialWeight for GeneralizedProfile {
    fn model(&self) -> &BulkModel {
        &self.model
    }

    fn weight(&self, r: f64) -> f64 {
        if self.gamma == 0.0 {
            return 1.0;
        }
        let x = self.x(r);
        match self.law {
            WeightLaw::Linear => 1.0 + x,
            WeightLaw::Squared => (1.0 + x * x).sqrt(),
        }
    }

    fn weight_derivative(&self, r: f64) -> f64 {
        if self.gamma == 0.0 {
            return 0.0;
        }
        let dx = self.gamma * self.model.l.powi(4) * self.model.c2_prime(r);
        match self.law {
            WeightLaw::Linear => dx,
            WeightLaw::Squared => {
                let x = self.x(r);
                x * dx / (1.0 + x * x).sqrt()
            }
        }
    }
}

impl GammaFamily for GeneralizedProfile {
    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn with_gamma(&self, gamma: f64) -> Self {
        Self { gamma, ..*self }
    }

    fn weight_gamma_derivative(&self, r: f64) -> f64 {
        let c = self.model.l.powi(4) * self.model.c2(r);
        match self.law {
            WeightLaw::Linear => c,
            WeightLaw::Squared => {
                let x = self.gamma * c;
                x * c / (1.0 + x * x).sqrt()
            }
        }
    }
}

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(LabError::Domain(format!("radius must be positive and finite, got {r}")))
    }
}

pub fn weight<W: RadialWeight + ?Sized>(w: &W, r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(w.weight(r))
}

pub fn effective_potential<W: RadialWeight + ?Sized>(w: &W, r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(potential(w, r))
}

/// `U(r)`, unchecked.
pub(crate) fn potential<W: RadialWeight + ?Sized>(w: &W, r: f64) -> f64 {
    let m = w.model();
    let a = w.weight(r);
    -m.f(r) * a * a * r.powf(2.0 * (m.dim() - 1.0))
}

/// `U'(r)`.
pub fn potential_gradient<W: RadialWeight + ?Sized>(w: &W, r: f64) -> f64 {
    let m = w.model();
    let d = m.dim();
    let a = w.weight(r);
    let da = w.weight_derivative(r);
    let f = m.f(r);
    let p = r.powf(2.0 * d - 3.0);
    -(m.f_prime(r) * a * a * r + 2.0 * f * a * da * r + (2.0 * d - 2.0) * f * a * a) * p
}

/// `U''(r)` by a central difference of the analytic gradient.
pub fn potential_curvature<W: RadialWeight + ?Sized>(w: &W, r: f64) -> f64 {
    let h = 1e-5 * r;
    (potential_gradient(w, r + h) - potential_gradient(w, r - h)) / (2.0 * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalKind {
    LocalMax,
    LocalMin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub r_i: f64,
    pub level: f64,
    pub kind: CriticalKind,
    pub index: usize,
    /// `|U'(r_i)|` after refinement
    pub gradient: f64,
}

/// Log-spaced radii, endpoints included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|k| if k + 1 == n { hi } else { lo * (step * k as f64).exp() }).collect()
}

/// Critical points of `U` on `(r_lo, r_hi)`. Sign changes of the gradient on
/// a log grid of `n_grid` nodes are refined by bisection; features narrower
/// than the grid spacing can be missed.
pub fn find_critical_points<W: RadialWeight + ?Sized>(
    w: &W,
    r_lo: f64,
    r_hi: f64,
    n_grid: usize,
) -> Result<Vec<CriticalPoint>> {
    if !(r_lo > 0.0 && r_hi > r_lo && r_hi.is_finite()) {
        return Err(LabError::Config(format!("invalid scan range ({r_lo}, {r_hi})")));
    }
    if n_grid < 100 {
        return Err(LabError::Config(format!("n_grid must be at least 100, got {n_grid}")));
    }
    let grid = log_grid(r_lo, r_hi, n_grid);
    let grad: Vec<f64> = grid.iter().map(|&r| potential_gradient(w, r)).collect();
    let mut out = Vec::new();
    for k in 0..n_grid - 1 {
        let (g0, g1) = (grad[k], grad[k + 1]);
        if g0 == 0.0 || !(g0.is_finite() && g1.is_finite()) || g0.signum() == g1.signum() {
            continue;
        }
        let r = roots::bisect(|r| potential_gradient(w, r), grid[k], grid[k + 1], 0.0, 0.0)?;
        let kind = if g0 > 0.0 { CriticalKind::LocalMax } else { CriticalKind::LocalMin };
        let gradient = potential_gradient(w, r).abs();
        out.push(CriticalPoint { r_i: r, level: potential(w, r), kind, index: 0, gradient });
    }
    for (i, cp) in out.iter_mut().enumerate() {
        cp.index = i;
    }
    self_check(w, r_lo, r_hi, &out)?;
    Ok(out)
}

/// Pure CV on the planar family has exactly one interior maximum at
/// `r_h 2^{-1/d}`.
fn self_check<W: RadialWeight + ?Sized>(w: &W, r_lo: f64, r_hi: f64, cps: &[CriticalPoint]) -> Result<()> {
    let m = w.model();
    if m.family != Family::PlanarSads || m.is_vacuum() {
        return Ok(());
    }
    let probe = [0.3, 0.5, 0.9, 1.3];
    if probe.iter().any(|&x| w.weight(x * m.r_h) != 1.0) {
        return Ok(());
    }
    let r_star = m.r_h * 2f64.powf(-1.0 / m.dim());
    if r_star <= r_lo || r_star >= r_hi {
        return Ok(());
    }
    let maxima: Vec<&CriticalPoint> = cps.iter().filter(|c| c.kind == CriticalKind::LocalMax).collect();
    if maxima.len() != 1 || (maxima[0].r_i - r_star).abs() > 1e-6 * m.r_h {
        return Err(LabError::SelfCheck(format!(
            "expected one maximum at r = {r_star:.9}, found {} maxima",
            maxima.len()
        )));
    }
    Ok(())
}

/// Interior local maxima on `(r_lo, r_h)`.
pub fn interior_maxima<W: RadialWeight + ?Sized>(w: &W, r_lo: f64, n_grid: usize) -> Result<Vec<CriticalPoint>> {
    let rh = w.model().r_h;
    Ok(find_critical_points(w, r_lo, rh * (1.0 - 1e-12), n_grid)?
        .into_iter()
        .filter(|c| c.kind == CriticalKind::LocalMax)
        .collect())
}

/// Radii where `U(r) = alpha` on `(r_lo, r_hi)`, the level-crossing reading
/// of a jump radius.
pub fn level_crossings<W: RadialWeight + ?Sized>(
    w: &W,
    alpha: f64,
    r_lo: f64,
    r_hi: f64,
    n_grid: usize,
) -> Result<Vec<f64>> {
    if !(r_lo > 0.0 && r_hi > r_lo) {
        return Err(LabError::Config(format!("invalid scan range ({r_lo}, {r_hi})")));
    }
    let grid = log_grid(r_lo, r_hi, n_grid.max(2));
    let vals: Vec<f64> = grid.iter().map(|&r| potential(w, r) - alpha).collect();
    let mut out = Vec::new();
    for k in 0..grid.len() - 1 {
        if vals[k] == 0.0 {
            out.push(grid[k]);
        } else if vals[k].signum() != vals[k + 1].signum() && vals[k + 1] != 0.0 {
            out.push(roots::bisect(|r| potential(w, r) - alpha, grid[k], grid[k + 1], 0.0, 0.0)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSample {
    pub r: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub a: f64,
    pub weyl_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialProfile {
    pub samples: Vec<PotentialSample>,
    pub critical_points: Vec<CriticalPoint>,
}

impl PotentialProfile {
    pub fn build<W: RadialWeight + ?Sized>(w: &W, r_lo: f64, r_hi: f64, n_grid: usize) -> Result<Self> {
        let critical_points = find_critical_points(w, r_lo, r_hi, n_grid)?;
        let m = w.model();
        let samples = log_grid(r_lo, r_hi, n_grid)
            .into_iter()
            .map(|r| PotentialSample { r, u: potential(w, r), a: w.weight(r), weyl_sq: m.c2(r) })
            .collect();
        Ok(Self { samples, critical_points })
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["r", "U", "a", "weyl_sq"]);
        for s in &self.samples {
            t.push(vec![num(s.r), num(s.u), num(s.a), num(s.weyl_sq)]);
        }
        t
    }
}
