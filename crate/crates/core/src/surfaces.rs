//! Extremal slices of the weighted volume functional.
//!
//! A symmetric slice with conserved momentum `P > 0` turns at `r_min` with
//! `P² = U(r_min)`. With the gauge eliminated, the boundary time and the
//! on-shell functional are
//!
//! ```text
//! τ = -2 PV∫_{r_min}^{∞} P / (f √(P² - U)) dr
//! C = 2 ∫_{r_min}^{r_cut} r^{2(d-1)} a² / √(P² - U) dr
//! ```
//!
//! and `dC/dτ = P`. The `1/f` pole at the horizon has residue `1/f'(r_h)`;
//! the inverse square root at `r_min` is removed by `r = r_min + s²`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::functional::{self, potential, potential_gradient, CriticalKind, RadialWeight};
use crate::io::{num, Table};
use crate::quadrature::{FixedRule, Integrator};
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceConfig {
    /// UV cutoff in units of `r_h`.
    pub r_cut_factor: f64,
    /// Smallest turning point considered, in units of `r_h`.
    pub r_floor_factor: f64,
    pub n_grid: usize,
    /// Table nodes clustered toward each end of a branch.
    pub nodes_per_end: usize,
    /// Closest approach to a branch end, in units of `r_h`.
    pub delta_min: f64,
    pub quad_abs: f64,
    pub quad_rel: f64,
    pub tau_abs: f64,
    pub tau_rel: f64,
    pub root_tol: f64,
    pub prefactor: f64,
}

impl Default for SurfaceConfig {
    fn default() -> Self {
        Self {
            r_cut_factor: 20.0,
            r_floor_factor: 0.05,
            n_grid: functional::DEFAULT_GRID,
            nodes_per_end: 40,
            delta_min: 1e-7,
            quad_abs: 1e-13,
            quad_rel: 1e-11,
            tau_abs: 1e-10,
            tau_rel: 1e-10,
            root_tol: 1e-12,
            prefactor: 1.0,
        }
    }
}

impl SurfaceConfig {
    fn integrator(&self) -> Integrator {
        Integrator { abs_tol: self.quad_abs, rel_tol: self.quad_rel, max_panels: 4000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSolution {
    pub p_v: f64,
    pub r_min: f64,
    pub tau: f64,
    pub complexity: f64,
    pub branch: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchEnd {
    /// the horizon: `P → 0`, `τ → 0`
    Horizon,
    /// a barrier top or the foot of one: `τ → ∞`
    Barrier,
    /// the turning-point floor below a potential wall
    Wall,
}

/// A maximal run of admissible turning points: `U(r_min)` exceeds `U` on all
/// of `(r_min, r_h)`, so the slice can reach the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub index: usize,
    pub outer: f64,
    pub inner: f64,
    pub outer_level: f64,
    pub inner_level: f64,
    pub outer_end: BranchEnd,
    pub inner_end: BranchEnd,
}

impl Branch {
    /// Radius of the barrier whose level caps this branch (the wall floor for
    /// a wall branch).
    pub fn barrier_radius(&self) -> f64 {
        self.inner
    }
}

/// Admissible branches on `(r_floor, r_h)`, ordered from the horizon inward.
pub fn branches<W: RadialWeight + ?Sized>(w: &W, r_floor: f64, n_grid: usize) -> Result<Vec<Branch>> {
    let m = w.model();
    if m.is_vacuum() {
        return Err(LabError::Domain("extremal slices need a horizon".into()));
    }
    let rh = m.r_h;
    let maxima = functional::interior_maxima(w, r_floor, n_grid)?;
    let mut out = Vec::new();
    let mut outer = rh;
    let mut outer_level = 0.0;
    let mut outer_end = BranchEnd::Horizon;
    for cp in maxima.iter().rev() {
        if cp.r_i >= outer || cp.level <= outer_level {
            continue;
        }
        out.push(Branch {
            index: out.len(),
            outer,
            inner: cp.r_i,
            outer_level,
            inner_level: cp.level,
            outer_end,
            inner_end: BranchEnd::Barrier,
        });
        // continue inward only where U climbs past this barrier again
        let level = cp.level;
        let up = functional::level_crossings(w, level, r_floor, cp.r_i * (1.0 - 1e-9), n_grid)?;
        match up.iter().copied().filter(|&r| potential_gradient(w, r) < 0.0).fold(None, |acc: Option<f64>, r| {
            Some(acc.map_or(r, |a| a.max(r)))
        }) {
            Some(r) => {
                outer = r;
                outer_level = level;
                outer_end = BranchEnd::Barrier;
            }
            None => return Ok(out),
        }
    }
    if potential(w, r_floor) > outer_level && outer > r_floor {
        out.push(Branch {
            index: out.len(),
            outer,
            inner: r_floor,
            outer_level,
            inner_level: potential(w, r_floor),
            outer_end,
            inner_end: BranchEnd::Wall,
        });
    }
    Ok(out)
}

/// `P² - U(r)` at `r = r_min + dr`. Close to `r_min` the difference is formed
/// by integrating `U'`, keeping full relative precision even when `r_min + dr`
/// rounds to `r_min`.
fn gap<W: RadialWeight + ?Sized>(w: &W, r_min: f64, u_min: f64, dr: f64, rule: &FixedRule) -> f64 {
    if dr.abs() < 0.05 * r_min {
        -dr * rule.unit_nodes().map(|(x, wt)| wt * potential_gradient(w, r_min + x * dr)).sum::<f64>()
    } else {
        u_min - potential(w, r_min + dr)
    }
}

struct Kernel<'a, W: RadialWeight + ?Sized> {
    w: &'a W,
    integ: Integrator,
    /// the pole subtraction at the horizon leaves a noise floor near 1e-12,
    /// so the time integrals run at a looser absolute tolerance
    tau_integ: Integrator,
    rule: FixedRule,
    /// barrier radii, used as quadrature breaks
    barriers: Vec<f64>,
}

impl<'a, W: RadialWeight + ?Sized> Kernel<'a, W> {
    fn new(w: &'a W, cfg: &SurfaceConfig, barriers: Vec<f64>) -> Self {
        let tau_integ = Integrator { abs_tol: cfg.tau_abs, rel_tol: cfg.tau_rel, max_panels: 4000 };
        Self { w, integ: cfg.integrator(), tau_integ, rule: FixedRule::new(15), barriers }
    }

    /// Breaks for the `s = √(r - r_min)` map of `[r_min, r_end]`.
    fn s_breaks(&self, r_min: f64, r_end: f64) -> Vec<f64> {
        let s_end = (r_end - r_min).sqrt();
        let mut b = vec![0.0, s_end];
        let mut s = s_end;
        for _ in 0..16 {
            s /= 3.0;
            b.push(s);
        }
        let rh = self.w.model().r_h;
        for &rb in &self.barriers {
            for off in [0.0, 1e-2, -1e-2, 1e-4, -1e-4, 1e-6, -1e-6] {
                let r = rb + off * rh;
                if r > r_min && r < r_end {
                    b.push((r - r_min).sqrt());
                }
            }
        }
        b.sort_by(|x, y| x.total_cmp(y));
        b.dedup();
        b
    }

    /// Boundary time of the slice turning at `r_min` with `P = +√U(r_min)`.
    fn tau(&self, r_min: f64) -> Result<f64> {
        let w = self.w;
        let m = w.model();
        let rh = m.r_h;
        if !(r_min > 0.0 && r_min < rh) {
            return Err(LabError::Domain(format!("turning point {r_min} outside (0, r_h)")));
        }
        let u_min = potential(w, r_min);
        if u_min <= 0.0 {
            return Err(LabError::Domain(format!("U({r_min}) = {u_min:e} is not positive")));
        }
        let p = u_min.sqrt();
        let c = 1.0 / m.f_prime(rh);
        let depth = rh - r_min;
        // x = r - r_h throughout, f = x q(r)
        // x = r - r_h and dr = r - r_min are both passed to avoid rounding either one
        let scaled = |x: f64, dr: f64| p / (m.f_quotient(rh + x) * gap(w, r_min, u_min, dr, &self.rule).sqrt());
        // kernel minus its horizon pole, (P/(q√D) - c) / x
        let regular = |x: f64, dr: f64| if x == 0.0 { 0.0 } else { (scaled(x, dr) - c) / x };
        let g0 = -potential_gradient(w, r_min);
        let inner = self.tau_integ.integrate_with_breaks(
            |s: f64| {
                if s == 0.0 {
                    return 2.0 * p / (m.f(r_min) * g0.sqrt());
                }
                regular(s * s - depth, s * s) * 2.0 * s
            },
            &self.s_breaks(r_min, rh),
        )?;
        let span = rh;
        let mut breaks = vec![0.0, span];
        for k in 1..8 {
            breaks.push(span * 10f64.powi(-k) * u_min.min(1.0));
        }
        breaks.sort_by(|x, y| x.total_cmp(y));
        breaks.dedup();
        let middle = self.tau_integ.integrate_with_breaks(|x| regular(x, x + depth), &breaks)?;
        let tail = self.tau_integ.integrate_to_infinity(|r| scaled(r - rh, r - r_min) / (r - rh), rh + span)?;
        let pv = c * (span / depth).ln();
        Ok(-2.0 * (inner.value + middle.value + tail.value + pv))
    }

    /// Regulated functional of the slice turning at `r_min` (`r_min = r_h`
    /// is the `τ = 0` slice).
    fn complexity(&self, r_min: f64, r_cut: f64) -> Result<f64> {
        let w = self.w;
        let m = w.model();
        let rh = m.r_h;
        let d = m.dim();
        if !(r_min > 0.0 && r_min <= rh) {
            return Err(LabError::Domain(format!("turning point {r_min} outside (0, r_h]")));
        }
        if r_cut <= rh {
            return Err(LabError::Domain(format!("cutoff {r_cut} must lie outside the horizon")));
        }
        let u_min = if r_min == rh { 0.0 } else { potential(w, r_min) };
        let density = |dr: f64| {
            let r = r_min + dr;
            let a = w.weight(r);
            r.powf(2.0 * (d - 1.0)) * a * a / gap(w, r_min, u_min, dr, &self.rule).sqrt()
        };
        let g0 = -potential_gradient(w, r_min);
        let split = if r_min < rh { rh } else { rh + 0.5 * (r_cut - rh) };
        let near = self.integ.integrate_with_breaks(
            |s: f64| {
                if s == 0.0 {
                    let a = w.weight(r_min);
                    return 2.0 * r_min.powf(2.0 * (d - 1.0)) * a * a / g0.sqrt();
                }
                density(s * s) * 2.0 * s
            },
            &self.s_breaks(r_min, split),
        )?;
        let far = self.integ.integrate(|r| density(r - r_min), split, r_cut)?;
        Ok(2.0 * (near.value + far.value))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub r_min: f64,
    pub tau: f64,
    pub complexity: f64,
    pub p_v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchTable {
    pub branch: Branch,
    /// ordered by `r_min`, decreasing
    pub rows: Vec<TableRow>,
    /// nodes where a quadrature failed
    pub failed: usize,
}

/// One candidate slice at a requested boundary time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub branch: usize,
    /// monotone piece of `τ(r_min)` within the branch
    pub segment: usize,
    pub r_min: f64,
    pub p_v: f64,
    pub complexity: f64,
    /// past the last tabulated node of a divergent end: `P` is the barrier
    /// value and `C` continues linearly with slope `P`
    pub asymptotic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub tau: f64,
    pub cgr: f64,
    pub branch: usize,
    pub segment: usize,
    pub p_v: f64,
    pub r_min: f64,
    pub complexity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CgrCurve {
    pub points: Vec<CurvePoint>,
    pub prefactor: f64,
    /// times at which no branch reaches the boundary
    pub holes: Vec<f64>,
}

impl CgrCurve {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["tau", "cgr", "branch", "p_v", "r_min"]);
        for p in &self.points {
            t.push(vec![num(p.tau), num(p.cgr), p.branch.to_string(), num(p.p_v), num(p.r_min)]);
        }
        t
    }
}

/// Anything that can name the maximizing branch at a given time.
pub trait BranchOracle: Sync {
    fn dominant(&self, tau: f64) -> Option<CurvePoint>;

    /// `(radius, U level)` of the barrier that caps `branch`, if any.
    fn barrier(&self, _branch: usize) -> Option<(f64, f64)> {
        None
    }
}

/// Branch analysis plus tabulated `(r_min, τ, C, P)` for one weight.
pub struct SurfaceSolver<'a, W: RadialWeight + ?Sized> {
    w: &'a W,
    cfg: SurfaceConfig,
    kernel: Kernel<'a, W>,
    pub branches: Vec<Branch>,
    pub tables: Vec<BranchTable>,
}

fn end_offsets(span: f64, delta_min: f64, n: usize) -> Vec<f64> {
    let hi = 0.5 * span;
    if delta_min >= hi {
        return vec![hi];
    }
    functional::log_grid(delta_min, hi, n.max(2))
}

impl<'a, W: RadialWeight + ?Sized> SurfaceSolver<'a, W> {
    pub fn new(w: &'a W, cfg: SurfaceConfig) -> Result<Self> {
        let rh = w.model().r_h;
        let branches = branches(w, cfg.r_floor_factor * rh, cfg.n_grid)?;
        let barriers = functional::find_critical_points(w, cfg.r_floor_factor * rh, rh * (1.0 - 1e-12), cfg.n_grid)?
            .into_iter()
            .filter(|c| c.kind == CriticalKind::LocalMax)
            .map(|c| c.r_i)
            .collect();
        let kernel = Kernel::new(w, &cfg, barriers);
        let mut solver = Self { w, cfg, kernel, branches, tables: Vec::new() };
        let tables: Vec<BranchTable> = solver.branches.iter().map(|b| solver.tabulate(b)).collect();
        solver.tables = tables;
        Ok(solver)
    }

    pub fn config(&self) -> &SurfaceConfig {
        &self.cfg
    }

    pub fn r_cut(&self) -> f64 {
        self.cfg.r_cut_factor * self.w.model().r_h
    }

    fn tabulate(&self, b: &Branch) -> BranchTable {
        let rh = self.w.model().r_h;
        let span = b.outer - b.inner;
        let offs = end_offsets(span, self.cfg.delta_min * rh, self.cfg.nodes_per_end);
        let mut radii: Vec<f64> = offs.iter().map(|o| b.outer - o).chain(offs.iter().map(|o| b.inner + o)).collect();
        radii.sort_by(|x, y| y.total_cmp(x));
        radii.dedup();
        let mut rows = Vec::with_capacity(radii.len() + 1);
        let mut failed = 0;
        if b.outer_end == BranchEnd::Horizon {
            match self.kernel.complexity(rh, self.r_cut()) {
                Ok(c) => rows.push(TableRow { r_min: rh, tau: 0.0, complexity: c, p_v: 0.0 }),
                Err(_) => failed += 1,
            }
        }
        for r in radii {
            match self.row(r) {
                Ok(row) => rows.push(row),
                Err(e) => { eprintln!("row {r} {e}"); failed += 1 }
            }
        }
        BranchTable { branch: *b, rows, failed }
    }

    fn row(&self, r_min: f64) -> Result<TableRow> {
        let tau = self.kernel.tau(r_min)?;
        let complexity = self.kernel.complexity(r_min, self.r_cut())?;
        Ok(TableRow { r_min, tau, complexity, p_v: potential(self.w, r_min).sqrt() })
    }

    /// `τ` for the slice turning at `r_min` (positive momentum).
    pub fn tau_at(&self, r_min: f64) -> Result<f64> {
        if r_min == self.w.model().r_h {
            return Ok(0.0);
        }
        self.kernel.tau(r_min)
    }

    pub fn complexity_at(&self, r_min: f64, r_cut: f64) -> Result<f64> {
        self.kernel.complexity(r_min, r_cut)
    }

    /// Solution on `branch` turning at `r_min`.
    pub fn solution(&self, branch: usize, r_min: f64) -> Result<SurfaceSolution> {
        let tau = self.tau_at(r_min)?;
        let complexity = self.complexity_at(r_min, self.r_cut())?;
        let p_v = potential(self.w, r_min).max(0.0).sqrt();
        Ok(SurfaceSolution { p_v, r_min, tau, complexity, branch })
    }

    /// Every slice anchored at boundary time `tau ≥ 0`. Slices whose
    /// positive-momentum time is `-tau` enter mirrored, with `p_v < 0`.
    pub fn candidates(&self, tau: f64) -> Vec<Candidate> {
        let mut out = self.positive_candidates(tau);
        if tau > 0.0 {
            out.extend(self.positive_candidates(-tau).into_iter().map(|c| Candidate { p_v: -c.p_v, ..c }));
        }
        out
    }

    fn positive_candidates(&self, tau: f64) -> Vec<Candidate> {
        let mut out = Vec::new();
        for table in &self.tables {
            let rows = &table.rows;
            if rows.is_empty() {
                continue;
            }
            let mut segment = 0;
            for k in 0..rows.len().saturating_sub(1) {
                let (a, b) = (&rows[k], &rows[k + 1]);
                if k > 0 && (rows[k].tau - rows[k - 1].tau).signum() != (b.tau - a.tau).signum() {
                    segment += 1;
                }
                let lo = a.tau.min(b.tau);
                let hi = a.tau.max(b.tau);
                if tau < lo || tau > hi || (tau == b.tau && k + 2 < rows.len()) {
                    continue;
                }
                if let Ok(c) = self.refine(table.branch.index, segment, a, b, tau) {
                    out.push(c);
                }
            }
            // late times beyond the last node of a divergent end
            let b = &table.branch;
            let last_outer = rows.iter().find(|r| r.tau != 0.0);
            if b.outer_end == BranchEnd::Barrier {
                if let Some(first) = last_outer {
                    if tau > first.tau {
                        out.push(self.extrapolate(b.index, 0, first, b.outer_level, tau));
                    }
                }
            }
            if b.inner_end == BranchEnd::Barrier {
                let last = rows[rows.len() - 1];
                if tau > last.tau {
                    out.push(self.extrapolate(b.index, segment, &last, b.inner_level, tau));
                }
            }
        }
        out
    }

    fn extrapolate(&self, branch: usize, segment: usize, row: &TableRow, level: f64, tau: f64) -> Candidate {
        let p = level.sqrt();
        Candidate {
            branch,
            segment,
            r_min: row.r_min,
            p_v: p,
            complexity: row.complexity + p * (tau - row.tau),
            asymptotic: true,
        }
    }

    fn refine(&self, branch: usize, segment: usize, a: &TableRow, b: &TableRow, tau: f64) -> Result<Candidate> {
        let r_min = if tau == a.tau {
            a.r_min
        } else if tau == b.tau {
            b.r_min
        } else {
            let tol = self.cfg.root_tol * self.w.model().r_h;
            roots::illinois(|r| Ok(self.tau_at(r)? - tau), a.r_min, b.r_min, tol)?
        };
        let complexity = self.complexity_at(r_min, self.r_cut())?;
        let p_v = potential(self.w, r_min).max(0.0).sqrt();
        Ok(Candidate { branch, segment, r_min, p_v, complexity, asymptotic: false })
    }

    /// The maximal-functional slice at `tau` (odd in `tau`).
    pub fn dominant_at(&self, tau: f64) -> Option<CurvePoint> {
        let best = self
            .candidates(tau.abs())
            .into_iter()
            .fold(None, |acc: Option<Candidate>, c| match acc {
                Some(b) if b.complexity >= c.complexity => Some(b),
                _ => Some(c),
            })?;
        let sign = if tau < 0.0 { -1.0 } else { 1.0 };
        Some(CurvePoint {
            tau,
            cgr: sign * self.cfg.prefactor * best.p_v,
            branch: best.branch,
            segment: best.segment,
            p_v: sign * best.p_v,
            r_min: best.r_min,
            complexity: self.cfg.prefactor * best.complexity,
        })
    }

    pub fn curve(&self, tau_grid: &[f64]) -> Result<CgrCurve> {
        if tau_grid.windows(2).any(|w| w[1] < w[0]) || tau_grid.iter().any(|t| *t < 0.0 || !t.is_finite()) {
            return Err(LabError::Config("tau grid must be sorted and nonnegative".into()));
        }
        use rayon::prelude::*;
        let pts: Vec<(f64, Option<CurvePoint>)> =
            tau_grid.par_iter().map(|&t| (t, self.dominant_at(t))).collect();
        let mut points = Vec::new();
        let mut holes = Vec::new();
        for (t, p) in pts {
            match p {
                Some(p) => points.push(p),
                None => holes.push(t),
            }
        }
        Ok(CgrCurve { points, prefactor: self.cfg.prefactor, holes })
    }
}

impl<W: RadialWeight + ?Sized> BranchOracle for SurfaceSolver<'_, W> {
    fn dominant(&self, tau: f64) -> Option<CurvePoint> {
        self.dominant_at(tau)
    }

    fn barrier(&self, branch: usize) -> Option<(f64, f64)> {
        let b = self.branches.get(branch)?;
        (b.inner_end == BranchEnd::Barrier).then_some((b.inner, b.inner_level))
    }
}

/// Turning point of the outermost branch: the largest root of `U = p_v²`
/// inside the horizon above the first barrier.
pub fn turning_point<W: RadialWeight + ?Sized>(w: &W, p_v: f64) -> Result<f64> {
    turning_point_with(w, p_v, &SurfaceConfig::default())
}

pub fn turning_point_with<W: RadialWeight + ?Sized>(w: &W, p_v: f64, cfg: &SurfaceConfig) -> Result<f64> {
    let rh = w.model().r_h;
    if p_v == 0.0 {
        return Ok(rh);
    }
    let bs = branches(w, cfg.r_floor_factor * rh, cfg.n_grid)?;
    let b = bs.first().ok_or(LabError::NoTurningPoint { p_sq: p_v * p_v, level: 0.0 })?;
    let p2 = p_v * p_v;
    if p2 >= b.inner_level {
        return Err(LabError::NoTurningPoint { p_sq: p2, level: b.inner_level });
    }
    roots::bisect(|r| potential(w, r) - p2, b.inner, rh, 0.0, 0.0)
}

/// Boundary time of the outermost-branch slice with momentum `p_v`.
pub fn boundary_time<W: RadialWeight + ?Sized>(w: &W, p_v: f64) -> Result<f64> {
    let cfg = SurfaceConfig::default();
    let r_min = turning_point_with(w, p_v, &cfg)?;
    if p_v == 0.0 {
        return Ok(0.0);
    }
    let tau = Kernel::new(w, &cfg, barrier_breaks(w, &cfg)?).tau(r_min)?;
    Ok(tau.copysign(p_v))
}

/// Regulated functional of the outermost-branch slice with momentum `p_v`.
pub fn complexity_value<W: RadialWeight + ?Sized>(w: &W, p_v: f64, r_cut: f64) -> Result<f64> {
    let cfg = SurfaceConfig::default();
    let r_min = turning_point_with(w, p_v, &cfg)?;
    Kernel::new(w, &cfg, barrier_breaks(w, &cfg)?).complexity(r_min, r_cut)
}

fn barrier_breaks<W: RadialWeight + ?Sized>(w: &W, cfg: &SurfaceConfig) -> Result<Vec<f64>> {
    let rh = w.model().r_h;
    Ok(functional::interior_maxima(w, cfg.r_floor_factor * rh, cfg.n_grid)?.into_iter().map(|c| c.r_i).collect())
}

pub fn cgr_curve<W: RadialWeight + ?Sized>(w: &W, tau_grid: &[f64], cfg: SurfaceConfig) -> Result<CgrCurve> {
    SurfaceSolver::new(w, cfg)?.curve(tau_grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub tau: f64,
    pub value: f64,
    /// symmetric point of the maximizing slice
    pub r0: f64,
    /// the multi-start maxima disagreed
    pub stagnation: bool,
}

/// Direct maximization of the discretized functional over piecewise-linear
/// `v(r)` profiles anchored at boundary time `tau` on both sides.
///
/// Half a slice runs from the symmetric point `(r0, v = r*(r0))` to
/// `(r_cut, τ/2 + r*(r_cut))` on nodes clustered quadratically at `r0`. For
/// fixed `r0` the discretized functional is strictly concave in the node
/// values and is solved by Newton ascent; `r0` is then chosen by golden
/// section from several starts.
pub struct VolumeOracle<'a, W: RadialWeight + ?Sized> {
    w: &'a W,
    n_nodes: usize,
    r_cut: f64,
    rule: Vec<(f64, f64)>,
    rstar_cut: f64,
    window: (f64, f64),
}

impl<'a, W: RadialWeight + ?Sized> VolumeOracle<'a, W> {
    pub fn new(w: &'a W, n_nodes: usize, r_cut: f64) -> Result<Self> {
        if n_nodes < 64 {
            return Err(LabError::Config(format!("volume oracle needs at least 64 nodes, got {n_nodes}")));
        }
        let m = w.model();
        if m.is_vacuum() || r_cut <= m.r_h {
            return Err(LabError::Domain("volume oracle needs a horizon inside the cutoff".into()));
        }
        let rule = FixedRule::new(8).unit_nodes().collect();
        let window = (0.02 * m.r_h, m.r_h * (1.0 - 1e-9));
        Ok(Self { w, n_nodes, r_cut, rule, rstar_cut: m.tortoise_pv(r_cut)?, window })
    }

    /// Restrict the search over the symmetric point to `[lo, hi]`.
    pub fn with_window(mut self, lo: f64, hi: f64) -> Result<Self> {
        let rh = self.w.model().r_h;
        if !(0.0 < lo && lo < hi && hi < rh) {
            return Err(LabError::Config(format!("search window [{lo}, {hi}] must lie in (0, r_h)")));
        }
        self.window = (lo, hi);
        Ok(self)
    }

    /// Window for the outer branch: above the innermost minimum of `U` when
    /// a wall makes the unrestricted maximum run into the singularity.
    pub fn outer_basin(self) -> Result<Self> {
        let rh = self.w.model().r_h;
        let (lo, hi) = self.window;
        let cps = functional::find_critical_points(self.w, lo, hi, functional::DEFAULT_GRID)?;
        match cps.iter().filter(|c| c.kind == functional::CriticalKind::LocalMin).map(|c| c.r_i).reduce(f64::max) {
            Some(r) if r < hi => self.with_window(r, hi),
            _ => Ok(self),
        }
        .inspect(|o| debug_assert!(o.window.1 < rh))
    }

    fn nodes(&self, r0: f64) -> Vec<f64> {
        let n = self.n_nodes as f64;
        (0..=self.n_nodes).map(|k| r0 + (self.r_cut - r0) * (k as f64 / n).powi(2)).collect()
    }

    /// Per-segment quadrature data: `(weight · r^{d-1} a, f)` at each node.
    fn segment_data(&self, r: &[f64]) -> Vec<Vec<(f64, f64)>> {
        let m = self.w.model();
        let d = m.dim();
        r.windows(2)
            .map(|s| {
                self.rule
                    .iter()
                    .map(|&(x, wt)| {
                        let rr = s[0] + x * (s[1] - s[0]);
                        (wt * rr.powf(d - 1.0) * self.w.weight(rr), m.f(rr))
                    })
                    .collect()
            })
            .collect()
    }

    /// `(φ, φ', φ'')` of one segment as a function of `Δv`; `None` when the
    /// segment is not spacelike at some node. Inside the horizon the other
    /// spacelike sector `Δv < 2Δr/f` is not reachable by a slice that crosses
    /// the future horizon in these coordinates, and would make the functional
    /// unbounded, so `Δv > 0` is required.
    fn segment(data: &[(f64, f64)], dv: f64, dr: f64) -> Option<(f64, f64, f64)> {
        if !(dv > 0.0) {
            return None;
        }
        let (mut v, mut g, mut h) = (0.0, 0.0, 0.0);
        for &(wt, f) in data {
            let q = -f * dv * dv + 2.0 * dv * dr;
            if !(q > 0.0) {
                return None;
            }
            let sq = q.sqrt();
            v += wt * sq;
            g += wt * (dr - f * dv) / sq;
            h -= wt * dr * dr / (q * sq);
        }
        Some((v, g, h))
    }

    fn total(data: &[Vec<(f64, f64)>], r: &[f64], v: &[f64]) -> Option<f64> {
        let mut s = 0.0;
        for k in 0..data.len() {
            s += Self::segment(&data[k], v[k + 1] - v[k], r[k + 1] - r[k])?.0;
        }
        Some(s)
    }

    fn initial_profile(&self, r: &[f64], data: &[Vec<(f64, f64)>], v0: f64, vb: f64) -> Option<Vec<f64>> {
        let n = r.len() - 1;
        let total = vb - v0;
        if !(total > 0.0) {
            return None;
        }
        // segments with f > 0 somewhere are spacelike only for Δv < 2Δr/max f
        let caps: Vec<Option<f64>> = (0..n)
            .map(|k| {
                let fmax = data[k].iter().map(|&(_, f)| f).fold(f64::NEG_INFINITY, f64::max);
                (fmax > 0.0).then(|| 2.0 * (r[k + 1] - r[k]) / fmax)
            })
            .collect();
        let capped: f64 = caps.iter().flatten().sum();
        let free: f64 = (0..n).filter(|&k| caps[k].is_none()).map(|k| r[k + 1] - r[k]).sum();
        let share = if free > 0.0 {
            0.25 * (total / capped).min(1.0)
        } else if total < capped {
            total / capped
        } else {
            return None;
        };
        let rest = total - share * capped;
        let mut v = vec![v0; n + 1];
        for k in 0..n {
            let dv = match caps[k] {
                Some(c) => share * c,
                None => rest * (r[k + 1] - r[k]) / free,
            };
            v[k + 1] = v[k] + dv;
        }
        v[n] = vb;
        Self::total(data, r, &v).map(|_| v)
    }

    /// Maximum of the half-slice functional for a fixed symmetric point.
    pub fn half_value(&self, r0: f64, tau: f64) -> Option<f64> {
        let m = self.w.model();
        let r = self.nodes(r0);
        let data = self.segment_data(&r);
        let v0 = m.tortoise_pv(r0).ok()?;
        let vb = 0.5 * tau + self.rstar_cut;
        let mut v = self.initial_profile(&r, &data, v0, vb)?;
        let n = r.len() - 1;
        let mut value = Self::total(&data, &r, &v)?;
        for _ in 0..200 {
            // gradient and tridiagonal Hessian in the interior node values
            let mut g = vec![0.0; n + 1];
            let mut diag = vec![0.0; n + 1];
            let mut off = vec![0.0; n + 1];
            for k in 0..n {
                let (_, d1, d2) = Self::segment(&data[k], v[k + 1] - v[k], r[k + 1] - r[k])?;
                g[k + 1] += d1;
                g[k] -= d1;
                diag[k] += d2;
                diag[k + 1] += d2;
                off[k] = -d2;
            }
            // solve H p = -g on nodes 1..n-1 (Thomas algorithm)
            let size = n - 1;
            let mut cp = vec![0.0; size];
            let mut dp = vec![0.0; size];
            for i in 0..size {
                let j = i + 1;
                let a = if i > 0 { off[j - 1] } else { 0.0 };
                let denom = diag[j] - if i > 0 { a * cp[i - 1] } else { 0.0 };
                cp[i] = if i + 1 < size { off[j] / denom } else { 0.0 };
                dp[i] = (-g[j] - if i > 0 { a * dp[i - 1] } else { 0.0 }) / denom;
            }
            let mut step = vec![0.0; size];
            for i in (0..size).rev() {
                step[i] = dp[i] - if i + 1 < size { cp[i] * step[i + 1] } else { 0.0 };
            }
            let mut alpha = 1.0;
            let mut improved = None;
            for _ in 0..60 {
                let mut trial = v.clone();
                for i in 0..size {
                    trial[i + 1] += alpha * step[i];
                }
                if let Some(val) = Self::total(&data, &r, &trial) {
                    if val >= value {
                        improved = Some((trial, val));
                        break;
                    }
                }
                alpha *= 0.5;
            }
            match improved {
                Some((trial, val)) => {
                    let gain = val - value;
                    v = trial;
                    value = val;
                    if gain <= 1e-14 * value.abs() {
                        break;
                    }
                }
                None => break,
            }
        }
        Some(value)
    }

    /// Maximum over the symmetric point, from `starts` golden-section runs.
    /// Negative times use the time-reflected slice, whose profile is not
    /// regular on the ingoing chart.
    pub fn maximize(&self, tau: f64, starts: usize) -> Result<OracleResult> {
        let rh = self.w.model().r_h;
        let (lo, hi) = self.window;
        let objective = |r0: f64| self.half_value(r0, tau.abs()).unwrap_or(f64::NEG_INFINITY);
        let starts = starts.max(1);
        let mut best: Option<(f64, f64)> = None;
        let mut locs = Vec::new();
        for s in 0..starts {
            let a = lo + (hi - lo) * s as f64 / starts as f64;
            let b = lo + (hi - lo) * (s + 1) as f64 / starts as f64;
            let (x, fx) = roots::golden_max(objective, a, b, 1e-10 * rh);
            if fx.is_finite() {
                locs.push((x, fx));
                if best.is_none_or(|(_, bf)| fx > bf) {
                    best = Some((x, fx));
                }
            }
        }
        let (r0, half) = best.ok_or_else(|| LabError::Numerical(format!("no spacelike slice found at tau = {tau}")))?;
        // an interior maximum found by two starts at distinct radii with
        // nearly equal values signals a non-concave landscape
        let stagnation = locs.iter().any(|&(x, fx)| {
            (x - r0).abs() > 1e-3 * rh && (half - fx).abs() < 1e-8 * half.abs() && !near_edge(x, lo, hi, starts)
        });
        Ok(OracleResult { tau, value: 2.0 * half, r0, stagnation })
    }

    /// Implied growth rate by a central difference in `tau`.
    pub fn rate(&self, tau: f64, h: f64, starts: usize) -> Result<f64> {
        let a = self.maximize(tau + h, starts)?;
        let b = self.maximize(tau - h, starts)?;
        Ok((a.value - b.value) / (2.0 * h))
    }
}

fn near_edge(x: f64, lo: f64, hi: f64, starts: usize) -> bool {
    let cell = (hi - lo) / starts as f64;
    let k = ((x - lo) / cell).round();
    (x - (lo + k * cell)).abs() < 1e-6 * cell
}

/// Oracle value and implied rate at `tau`.
pub fn volume_oracle<W: RadialWeight + ?Sized>(w: &W, tau: f64, n_nodes: usize) -> Result<(OracleResult, f64)> {
    let r_cut = SurfaceConfig::default().r_cut_factor * w.model().r_h;
    let oracle = VolumeOracle::new(w, n_nodes, r_cut)?.outer_basin()?;
    let res = oracle.maximize(tau, 5)?;
    let rate = oracle.rate(tau, 0.05, 5)?;
    Ok((res, rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{GammaFamily, GeneralizedProfile};
    use crate::geometry::BulkModel;

    fn cv() -> GeneralizedProfile {
        GeneralizedProfile::new(BulkModel::planar(4, 1.0, 1.0).unwrap(), 0.0)
    }

    #[test]
    fn cv_has_one_branch() {
        let bs = branches(&cv(), 0.05, 4096).unwrap();
        assert_eq!(bs.len(), 1);
        assert!((bs[0].inner - 2f64.powf(-0.25)).abs() < 1e-12);
        assert!((bs[0].inner_level - 0.25).abs() < 1e-15);
    }

    #[test]
    fn turning_point_edges() {
        let p = cv();
        assert_eq!(turning_point(&p, 0.0).unwrap(), 1.0);
        let r = turning_point(&p, 0.5 - 1e-6).unwrap();
        assert!(r > 2f64.powf(-0.25) && r - 2f64.powf(-0.25) < 2e-3);
        let over = (0.25f64 + 0.01).sqrt();
        assert!(matches!(turning_point(&p, over), Err(LabError::NoTurningPoint { .. })));
    }

    #[test]
    fn boundary_time_is_odd_and_grows() {
        let p = cv();
        assert_eq!(boundary_time(&p, 0.0).unwrap(), 0.0);
        let t = boundary_time(&p, 0.3).unwrap();
        assert!(t > 0.0);
        assert!((boundary_time(&p, -0.3).unwrap() + t).abs() < 1e-14);
        let a = boundary_time(&p, 0.45).unwrap();
        let b = boundary_time(&p, 0.495).unwrap();
        let c = boundary_time(&p, 0.4995).unwrap();
        assert!(a < b && b < c);
    }

    #[test]
    fn static_slice_matches_direct_volume() {
        let p = cv();
        let c = complexity_value(&p, 0.0, 20.0).unwrap();
        let direct = Integrator::default()
            .integrate(|s: f64| {
                let r = 1.0 + s * s;
                2.0 * s * r.powi(3) / p.model.f(r).sqrt()
            }, 0.0, 19f64.sqrt())
            .unwrap()
            .value;
        assert!((c - 2.0 * direct).abs() < 1e-9 * c, "{c} vs {}", 2.0 * direct);
    }

    #[test]
    fn small_coupling_gets_wall_branch() {
        let p = cv().with_gamma(1e-4);
        let bs = branches(&p, 0.05, 4096).unwrap();
        assert_eq!(bs.len(), 2);
        assert_eq!(bs[1].inner_end, BranchEnd::Wall);
        assert!((bs[1].outer_level - bs[0].inner_level).abs() < 1e-15);
    }
}
