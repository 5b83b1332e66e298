//! Schwarzschild-AdS bulk geometries.
//!
//! Sign convention: `g_tt = -f(r)`, `g_rr = 1/f(r)`, with `f > 0` outside the
//! horizon. The bulk is `d + 1` dimensional.

use serde::{Deserialize, Serialize};

use crate::curvature::{self, sphere_components, DiagonalMetric, StepPolicy};
use crate::error::{LabError, Result};
use crate::quadrature::Integrator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    PlanarSads,
    GlobalSads,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::PlanarSads => "planar-sads",
            Family::GlobalSads => "global-sads",
        }
    }

    /// Curvature `k` of the transverse space.
    fn k(self) -> f64 {
        match self {
            Family::PlanarSads => 0.0,
            Family::GlobalSads => 1.0,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "planar-sads" | "planar" => Ok(Family::PlanarSads),
            "global-sads" | "global" => Ok(Family::GlobalSads),
            other => Err(LabError::Config(format!("unknown family '{other}'"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A static bulk geometry. `r_h = 0` denotes the vacuum (pure AdS) member of
/// the family, which is only constructible through [`BulkModel::vacuum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BulkModel {
    pub family: Family,
    pub d: u32,
    #[serde(rename = "L")]
    pub l: f64,
    pub r_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub r: f64,
    pub weyl_sq: f64,
    pub kretschmann: Option<f64>,
}

impl BulkModel {
    pub fn new(family: Family, d: u32, l: f64, r_h: f64) -> Result<Self> {
        if d < 3 {
            return Err(LabError::Config(format!("d must be at least 3, got {d}")));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(LabError::Config(format!("L must be positive, got {l}")));
        }
        if !(r_h.is_finite() && r_h > 0.0) {
            return Err(LabError::Config(format!("r_h must be positive, got {r_h}")));
        }
        Ok(Self { family, d, l, r_h })
    }

    /// Pure AdS in the same chart.
    pub fn vacuum(family: Family, d: u32, l: f64) -> Result<Self> {
        let mut m = Self::new(family, d, l, 1.0)?;
        m.r_h = 0.0;
        Ok(m)
    }

    pub fn planar(d: u32, l: f64, r_h: f64) -> Result<Self> {
        Self::new(Family::PlanarSads, d, l, r_h)
    }

    pub fn global(d: u32, l: f64, r_h: f64) -> Result<Self> {
        Self::new(Family::GlobalSads, d, l, r_h)
    }

    pub fn is_vacuum(&self) -> bool {
        self.r_h == 0.0
    }

    pub fn dim(&self) -> f64 {
        self.d as f64
    }

    /// Mass coefficient `M` in `f = k + r²/L² - M/r^{d-2}`.
    pub fn mass_parameter(&self) -> f64 {
        let d = self.dim();
        let l2 = self.l * self.l;
        match self.family {
            Family::PlanarSads => self.r_h.powf(d) / l2,
            Family::GlobalSads => self.r_h.powf(d - 2.0) * (1.0 + self.r_h * self.r_h / l2),
        }
    }

    fn check_r(&self, r: f64) -> Result<()> {
        if r.is_finite() && r > 0.0 {
            Ok(())
        } else {
            Err(LabError::Domain(format!("radius must be positive and finite, got {r}")))
        }
    }

    /// `f(r)`, unchecked.
    pub(crate) fn f(&self, r: f64) -> f64 {
        let d = self.dim();
        self.family.k() + r * r / (self.l * self.l) - self.mass_parameter() / r.powf(d - 2.0)
    }

    pub(crate) fn f_prime(&self, r: f64) -> f64 {
        let d = self.dim();
        2.0 * r / (self.l * self.l) + (d - 2.0) * self.mass_parameter() / r.powf(d - 1.0)
    }

    #[cfg(test)]
    pub(crate) fn f_second(&self, r: f64) -> f64 {
        let d = self.dim();
        2.0 / (self.l * self.l) - (d - 2.0) * (d - 1.0) * self.mass_parameter() / r.powf(d)
    }

    /// `f(r) / (r - r_h)`, free of the cancellation in `f` near the horizon.
    pub(crate) fn f_quotient(&self, r: f64) -> f64 {
        let rh = self.r_h;
        let n = self.d as i32 - 2;
        let sum: f64 = (0..n).map(|j| r.powi(j) * rh.powi(n - 1 - j)).sum();
        (r + rh) / (self.l * self.l) + self.mass_parameter() * sum / (r * rh).powi(n)
    }

    /// `(q(r) - q(r_h)) / (r - r_h)` with `q = f / (r - r_h)`, as a sum of
    /// same-signed terms.
    pub(crate) fn f_divided(&self, r: f64) -> f64 {
        let rh = self.r_h;
        let n = self.d as i32 - 2;
        let partial = |m: i32| -> f64 { (0..m).map(|j| r.powi(j) * rh.powi(m - 1 - j)).sum() };
        let tail: f64 = (1..=n).map(|m| rh.powi(m - 1) * partial(m) / (r * rh).powi(m)).sum();
        1.0 / (self.l * self.l) - self.mass_parameter() / rh.powi(n) * tail
    }

    /// `r²/L² - f(r)`, computed without cancellation.
    pub(crate) fn f_deficit(&self, r: f64) -> f64 {
        self.mass_parameter() / r.powf(self.dim() - 2.0) - self.family.k()
    }

    pub fn blackening(&self, r: f64) -> Result<f64> {
        self.check_r(r)?;
        let v = self.f(r);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(LabError::Domain(format!("f({r}) is not finite")))
        }
    }

    pub fn blackening_derivative(&self, r: f64) -> Result<f64> {
        self.check_r(r)?;
        Ok(self.f_prime(r))
    }

    /// `C²` of the bulk metric. For every member of both families this is
    /// `d (d-1)² (d-2) M² / r^{2d}`; the finite-difference oracle checks it.
    pub fn weyl_squared(&self, r: f64) -> Result<f64> {
        self.check_r(r)?;
        Ok(self.c2(r))
    }

    pub(crate) fn c2(&self, r: f64) -> f64 {
        let d = self.dim();
        let m = self.mass_parameter();
        d * (d - 1.0) * (d - 1.0) * (d - 2.0) * m * m / r.powf(2.0 * d)
    }

    /// `dC²/dr`.
    pub(crate) fn c2_prime(&self, r: f64) -> f64 {
        -2.0 * self.dim() * self.c2(r) / r
    }

    pub fn curvature_oracle(&self, r: f64) -> Result<CurvatureSample> {
        self.curvature_oracle_with(r, StepPolicy::default())
    }

    pub fn curvature_oracle_with(&self, r: f64, policy: StepPolicy) -> Result<CurvatureSample> {
        self.check_r(r)?;
        if !self.is_vacuum() && (r - self.r_h).abs() < 1e-8 * self.r_h.max(1.0) {
            return Err(LabError::Domain(format!("r = {r} sits on the coordinate singularity at r_h")));
        }
        let chart = BulkChart { model: *self };
        let mut x = vec![0.0; chart.dim()];
        x[1] = r;
        for (k, xi) in x.iter_mut().enumerate().skip(2) {
            // generic angles away from the poles
            *xi = 1.1 - 0.07 * k as f64;
        }
        let c = curvature::curvature_at(&chart, &x, policy)?;
        Ok(CurvatureSample { r, weyl_sq: c.weyl_squared(), kretschmann: Some(c.kretschmann()) })
    }

    /// Tortoise integral `∫ dr / f` between two radii on one side of the horizon.
    pub fn tortoise(&self, r_from: f64, r_to: f64) -> Result<f64> {
        self.check_r(r_from)?;
        self.check_r(r_to)?;
        if r_from == r_to {
            return Ok(0.0);
        }
        let (lo, hi, sign) = if r_from < r_to { (r_from, r_to, 1.0) } else { (r_to, r_from, -1.0) };
        if !self.is_vacuum() && lo <= self.r_h && hi >= self.r_h {
            return Err(LabError::Domain(format!(
                "tortoise interval [{lo}, {hi}] meets the horizon r_h = {}",
                self.r_h
            )));
        }
        let est = Integrator::new(1e-14, 1e-13).integrate(|r| 1.0 / self.f(r), lo, hi)?;
        Ok(sign * est.value)
    }

    /// Principal-value tortoise coordinate with `r*(∞) = 0`, finite on both
    /// sides of the horizon: the pole of `1/f` contributes
    /// `ln|r - r_h| / f'(r_h)`.
    pub fn tortoise_pv(&self, r: f64) -> Result<f64> {
        self.check_r(r)?;
        if self.is_vacuum() {
            // ∫_r^∞ ds / f(s), sign flipped
            let est = Integrator::default().integrate_to_infinity(|s| 1.0 / self.f(s), r)?;
            return Ok(-est.value);
        }
        let rh = self.r_h;
        if (r - rh).abs() < 1e-14 * rh {
            return Err(LabError::Domain("tortoise coordinate diverges at r_h".into()));
        }
        let fp = self.f_prime(rh);
        // regular part h(s) = 1/f(s) - 1/(f'_h (s - r_h)); the singular
        // piece integrates to ln|s - r_h| / f'_h, whose value at ∞ is removed
        // together with the asymptotic tail of h.
        let h = |s: f64| -self.f_divided(s) / (fp * self.f_quotient(s));
        // ∫_r^∞ [1/f - 1/(f'_h (s - r_h))] ds does not converge on its own
        // (the subtraction decays like 1/s), so split at R = 2 max(r, r_h)
        // and treat the outer piece with the full 1/f.
        let big_r = 2.0 * r.max(rh);
        let integ = Integrator::new(1e-14, 1e-12);
        let inner = integ.integrate_with_breaks(h, &breaks_around(r, rh, big_r))?.value;
        let outer = integ.integrate_to_infinity(|s| 1.0 / self.f(s), big_r)?.value;
        // r*(r) = -∫_r^∞ 1/f = -[∫_r^R h + ln((R - r_h)/|r - r_h|)/f'_h + ∫_R^∞ 1/f]
        Ok(-(inner + ((big_r - rh) / (r - rh).abs()).ln() / fp + outer))
    }
}

fn breaks_around(r: f64, rh: f64, big_r: f64) -> Vec<f64> {
    if r < rh {
        vec![r, rh, big_r]
    } else {
        vec![r, big_r]
    }
}

/// The bulk metric in Schwarzschild coordinates `(t, r, x₁ … x_{d-1})`, with
/// round-sphere angles for the global family.
struct BulkChart {
    model: BulkModel,
}

impl DiagonalMetric for BulkChart {
    fn dim(&self) -> usize {
        self.model.d as usize + 1
    }

    fn components(&self, x: &[f64]) -> Vec<f64> {
        let r = x[1];
        let f = self.model.f(r);
        let mut g = vec![-f, 1.0 / f];
        match self.model.family {
            Family::PlanarSads => {
                let w = r * r / (self.model.l * self.model.l);
                g.extend(std::iter::repeat_n(w, self.model.d as usize - 1));
            }
            Family::GlobalSads => g.extend(sphere_components(r * r, &x[2..])),
        }
        g
    }

    fn step(&self, x: &[f64], a: usize, rel: f64) -> f64 {
        if a != 1 {
            return rel;
        }
        let r = x[1];
        let h = rel * r;
        if self.model.is_vacuum() {
            h
        } else {
            // nested stencils reach two steps out; stay off the horizon
            h.min(0.2 * (r - self.model.r_h).abs())
        }
    }
}
