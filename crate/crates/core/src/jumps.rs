//! Jumps in the growth rate: barrier-count scans, branch-switch detection,
//! and the response of barrier radii to the coupling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::functional::{
    self, find_critical_points, potential_gradient, CriticalKind, CriticalPoint, GammaFamily, GeneralizedProfile,
    RadialWeight,
};
use crate::geometry::BulkModel;
use crate::io::{num, Table};
use crate::surfaces::{BranchOracle, CgrCurve, CurvePoint};

/// Fraction of `r_h` below which radii are not scanned.
pub const R_FLOOR: f64 = 0.05;
const SCAN_SAMPLES: usize = 200;

/// Number of local maxima of `U` on `(R_FLOOR r_h, r_h)`.
pub fn barrier_count<W: RadialWeight + ?Sized>(w: &W, n_grid: usize) -> Result<usize> {
    let rh = w.model().r_h;
    Ok(functional::interior_maxima(w, R_FLOOR * rh, n_grid)?.len())
}

fn scan_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if lo > 0.0 {
        functional::log_grid(lo, hi, n)
    } else {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }
}

/// Smallest coupling in `[gamma_lo, gamma_hi]` at which `accept(count)`
/// holds, located by sampling and then bisection on the count.
pub fn first_gamma_where<F, P>(family: &F, gamma_lo: f64, gamma_hi: f64, n_grid: usize, accept: P) -> Result<f64>
where
    F: GammaFamily + Send,
    P: Fn(usize) -> bool + Sync,
{
    count_bracket(family, gamma_lo, gamma_hi, n_grid, accept).map(|(_, hi)| hi)
}

/// `(last coupling rejected, first accepted)`; equal when `gamma_lo` is
/// already accepted.
fn count_bracket<F, P>(family: &F, gamma_lo: f64, gamma_hi: f64, n_grid: usize, accept: P) -> Result<(f64, f64)>
where
    F: GammaFamily + Send,
    P: Fn(usize) -> bool + Sync,
{
    if !(gamma_lo < gamma_hi) {
        return Err(LabError::DegenerateRange { lo: gamma_lo, hi: gamma_hi });
    }
    let holds = |g: f64| barrier_count(&family.with_gamma(g), n_grid).map(&accept);
    let samples = scan_points(gamma_lo, gamma_hi, SCAN_SAMPLES);
    let flags: Vec<bool> = samples.par_iter().map(|&g| holds(g)).collect::<Result<_>>()?;
    let first = flags.iter().position(|&f| f).ok_or(LabError::NotFound)?;
    if first == 0 {
        return Ok((gamma_lo, gamma_lo));
    }
    let (mut lo, mut hi) = (samples[first - 1], samples[first]);
    while hi - lo > 1e-12 * hi.abs().max(f64::MIN_POSITIVE) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Where a barrier and the neighbouring minimum of `U` annihilate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merger {
    pub gamma: f64,
    pub r: f64,
    pub level: f64,
}

impl Merger {
    /// The (degenerate) barrier at the merger.
    pub fn critical_point(&self) -> CriticalPoint {
        CriticalPoint { r_i: self.r, level: self.level, kind: CriticalKind::LocalMax, index: 0, gradient: 0.0 }
    }
}

/// First coupling in the range at which the outermost barrier disappears,
/// solved as the fold `∂U/∂r = ∂²U/∂r² = 0`. The barrier count only brackets
/// the fold to grid resolution, so the fold itself is found by bisecting on
/// the sign of `U'` at the zero of `U''` between the merging pair.
pub fn barrier_merger<F: GammaFamily + Send>(family: &F, gamma_lo: f64, gamma_hi: f64) -> Result<Merger> {
    let rh = family.model().r_h;
    let n0 = barrier_count(&family.with_gamma(gamma_lo), functional::DEFAULT_GRID)?;
    if n0 == 0 {
        return Err(LabError::Config(format!("no barrier at gamma = {gamma_lo}")));
    }
    let (before, after) = count_bracket(family, gamma_lo, gamma_hi, functional::DEFAULT_GRID, |n| n < n0)?;
    let at = family.with_gamma(before);
    let cps = find_critical_points(&at, R_FLOOR * rh, rh * (1.0 - 1e-12), functional::DEFAULT_GRID)?;
    let outer = cps.iter().rposition(|c| c.kind == CriticalKind::LocalMax).ok_or(LabError::NotFound)?;
    let partner = cps
        .iter()
        .enumerate()
        .filter(|(k, c)| c.kind == CriticalKind::LocalMin && k.abs_diff(outer) == 1)
        .map(|(_, c)| c.r_i)
        .min_by(|a, b| (a - cps[outer].r_i).abs().total_cmp(&(b - cps[outer].r_i).abs()))
        .ok_or_else(|| LabError::Root("the barrier has no neighbouring minimum to merge with".into()))?;
    let (a, b) = (partner.min(cps[outer].r_i), partner.max(cps[outer].r_i));
    // U'' changes sign between the pair; U' at that point changes sign at the
    // fold. Past the fold the bracket on U'' may be lost, which also counts as
    // beyond.
    let fold_r = |g: f64| -> Result<f64> {
        let w = family.with_gamma(g);
        crate::roots::bisect(|r| functional::potential_curvature(&w, r), a, b, 0.0, 0.0)
    };
    let s0 = potential_gradient(&at, fold_r(before)?).signum();
    let same_side = |g: f64| fold_r(g).map(|r| potential_gradient(&family.with_gamma(g), r).signum() == s0).unwrap_or(false);
    let mut lo = before;
    let mut step = (after - before).max(1e-9 * before.abs());
    let mut hi = loop {
        let trial = lo + step;
        if trial >= gamma_hi {
            break gamma_hi;
        }
        if !same_side(trial) {
            break trial;
        }
        lo = trial;
        step *= 2.0;
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if same_side(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = fold_r(lo)?;
    Ok(Merger { gamma: lo, r, level: functional::effective_potential(&family.with_gamma(lo), r)? })
}

/// Smallest `γ` in the range whose potential has two or more interior
/// barriers, for the linear curvature weight.
pub fn auto_scan_double_barrier(model: &BulkModel, gamma_lo: f64, gamma_hi: f64) -> Result<f64> {
    auto_scan(&GeneralizedProfile::new(*model, 0.0), gamma_lo, gamma_hi)
}

pub fn auto_scan<F: GammaFamily + Send>(family: &F, gamma_lo: f64, gamma_hi: f64) -> Result<f64> {
    first_gamma_where(family, gamma_lo, gamma_hi, functional::DEFAULT_GRID, |n| n >= 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub tau_star: f64,
    /// `cgr(τ*⁺) - cgr(τ*⁻)`
    pub delta_cgr: f64,
    pub branch_before: usize,
    pub branch_after: usize,
    /// barrier radii capping the two branches, when they end on barriers
    pub r_before: Option<f64>,
    pub r_after: Option<f64>,
    /// `prefactor (√U(r_after) - √U(r_before))`
    pub barrier_delta: Option<f64>,
    /// last grid time on the old branch and first on the new one
    pub bracket: (f64, f64),
    pub gamma: Option<f64>,
}

type Label = (usize, usize, bool);

fn label(p: &CurvePoint) -> Label {
    (p.branch, p.segment, p.p_v >= 0.0)
}

/// Branch switches along `curve`, each refined by bisection on the switch
/// predicate until the bracket is narrower than `tol`.
pub fn detect_jumps<O: BranchOracle + ?Sized>(curve: &CgrCurve, oracle: &O, tol: f64) -> Vec<JumpEvent> {
    let mut out = Vec::new();
    for pair in curve.points.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if label(a) == label(b) {
            continue;
        }
        let old = label(a);
        let (mut lo, mut hi) = (a.tau, b.tau);
        let (mut p_lo, mut p_hi) = (*a, *b);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            match oracle.dominant(mid) {
                Some(p) if label(&p) == old => {
                    lo = mid;
                    p_lo = p;
                }
                Some(p) => {
                    hi = mid;
                    p_hi = p;
                }
                None => hi = mid,
            }
        }
        let before = oracle.barrier(p_lo.branch);
        let after = oracle.barrier(p_hi.branch);
        let barrier_delta = before.zip(after).map(|((_, ub), (_, ua))| curve.prefactor * (ua.sqrt() - ub.sqrt()));
        out.push(JumpEvent {
            tau_star: 0.5 * (lo + hi),
            delta_cgr: p_hi.cgr - p_lo.cgr,
            branch_before: p_lo.branch,
            branch_after: p_hi.branch,
            r_before: before.map(|x| x.0),
            r_after: after.map(|x| x.0),
            barrier_delta,
            bracket: (a.tau, b.tau),
            gamma: None,
        });
    }
    out.sort_by(|x, y| x.tau_star.total_cmp(&y.tau_star));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRecord {
    pub r_i: f64,
    pub gamma: f64,
    pub dri_dgamma_ift: f64,
    pub dri_dgamma_fd: f64,
    /// `2 g⁽⁰⁾_tt L⁴C²` at `r_i`, with `g⁽⁰⁾_tt = -f L²/r²` the metric induced
    /// on the cutoff surface through `r_i`
    pub dri_dgamma_paper: f64,
    /// `|ift - fd| / |fd|`
    pub discrepancy_fd: f64,
    /// truncated estimate over the IFT value
    pub paper_ratio: f64,
    /// `∂G/∂r` with `G = ∂U/∂r`
    pub dg_dr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityOptions {
    /// coupling step; `None` uses `1e-6 max(γ, 1)`
    pub dgamma: Option<f64>,
    /// `|∂G/∂r|` below this is treated as a barrier merger
    pub degenerate_tol: f64,
}

impl Default for SensitivityOptions {
    fn default() -> Self {
        Self { dgamma: None, degenerate_tol: 1e-6 }
    }
}

/// `dr_i/dγ = -(∂G/∂γ)/(∂G/∂r)` at a root of `G(r, γ)`, both partials by
/// central differences.
pub fn ift_sensitivity<G: Fn(f64, f64) -> f64>(g: G, r: f64, gamma: f64, dgamma: f64, degenerate_tol: f64) -> Result<(f64, f64)> {
    let dr = 1e-5 * r.abs().max(1e-300);
    let g_r = (g(r + dr, gamma) - g(r - dr, gamma)) / (2.0 * dr);
    if !(g_r.abs() > degenerate_tol) {
        return Err(LabError::DegenerateCritical { r, slope: g_r });
    }
    let g_gamma = (g(r, gamma + dgamma) - g(r, gamma - dgamma)) / (2.0 * dgamma);
    Ok((-g_gamma / g_r, g_r))
}

/// `2 g⁽⁰⁾_tt L⁴ C²` at `r`, as written for the coupling response of a jump
/// radius.
pub fn truncated_response(model: &BulkModel, r: f64) -> f64 {
    let l = model.l;
    let g0_tt = -model.blackening(r).unwrap_or(f64::NAN) * l * l / (r * r);
    2.0 * g0_tt * l.powi(4) * model.weyl_squared(r).unwrap_or(f64::NAN)
}

fn nearest_max(cps: &[CriticalPoint], r: f64) -> Option<(f64, f64)> {
    let maxima: Vec<f64> = cps.iter().filter(|c| c.kind == CriticalKind::LocalMax).map(|c| c.r_i).collect();
    let best = maxima.iter().copied().min_by(|a, b| (a - r).abs().total_cmp(&(b - r).abs()))?;
    // half the distance to the next critical point on either side
    let spacing = cps
        .iter()
        .map(|c| (c.r_i - best).abs())
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    Some((best, spacing))
}

/// Matched barrier radius near `r` at coupling `gamma`.
fn matched_root<F: GammaFamily>(family: &F, gamma: f64, r: f64) -> Result<f64> {
    let rh = family.model().r_h;
    let cps = find_critical_points(&family.with_gamma(gamma), R_FLOOR * rh, rh * (1.0 - 1e-12), functional::DEFAULT_GRID)?;
    let (best, spacing) = nearest_max(&cps, r).ok_or_else(|| LabError::Root(format!("no barrier at gamma = {gamma}")))?;
    if (best - r).abs() >= 0.5 * spacing {
        return Err(LabError::Root(format!("barrier near r = {r} could not be matched at gamma = {gamma}")));
    }
    Ok(best)
}

pub fn sensitivity<F: GammaFamily>(family: &F, cp: &CriticalPoint, opts: SensitivityOptions) -> Result<SensitivityRecord> {
    if cp.kind != CriticalKind::LocalMax {
        return Err(LabError::Config("sensitivity is defined for barriers (local maxima)".into()));
    }
    let gamma = family.gamma();
    let dgamma = opts.dgamma.unwrap_or(1e-6 * gamma.abs().max(1.0));
    let g = |r: f64, gm: f64| potential_gradient(&family.with_gamma(gm), r);
    let (ift, dg_dr) = ift_sensitivity(g, cp.r_i, gamma, dgamma, opts.degenerate_tol)?;
    let plus = matched_root(family, gamma + dgamma, cp.r_i)?;
    let minus = matched_root(family, gamma - dgamma, cp.r_i)?;
    let fd = (plus - minus) / (2.0 * dgamma);
    let truncated = truncated_response(family.model(), cp.r_i);
    Ok(SensitivityRecord {
        r_i: cp.r_i,
        gamma,
        dri_dgamma_ift: ift,
        dri_dgamma_fd: fd,
        dri_dgamma_paper: truncated,
        discrepancy_fd: if fd == 0.0 { (ift - fd).abs() } else { ((ift - fd) / fd).abs() },
        paper_ratio: truncated / ift,
        dg_dr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowRow {
    pub gamma: f64,
    pub r_i: f64,
    pub r_j: f64,
    pub d_jumps: f64,
    pub dd_dgamma_fd: Option<f64>,
    pub dd_dgamma_paper: f64,
    /// truncated estimate over the finite difference
    pub discrepancy: Option<f64>,
    /// rows sharing a segment have matched barriers
    pub segment: usize,
}

/// The two outermost barriers at each coupling, their separation, and its
/// rate of change along the grid.
pub fn jump_distance_flow<F: GammaFamily + Send>(family: &F, gammas: &[f64]) -> Result<Vec<FlowRow>> {
    let rh = family.model().r_h;
    let pairs: Vec<(f64, f64)> = gammas
        .par_iter()
        .map(|&g| {
            let mut maxima = functional::interior_maxima(&family.with_gamma(g), R_FLOOR * rh, functional::DEFAULT_GRID)?;
            if maxima.len() < 2 {
                return Err(LabError::Config(format!("gamma = {g} has {} barriers, need two", maxima.len())));
            }
            maxima.sort_by(|a, b| b.r_i.total_cmp(&a.r_i));
            Ok((maxima[0].r_i, maxima[1].r_i))
        })
        .collect::<Result<_>>()?;
    // a step keeps the segment only if each barrier moved by less than half
    // the barrier spacing
    let mut segment = vec![0usize; pairs.len()];
    for k in 1..pairs.len() {
        let half = 0.5 * (pairs[k - 1].0 - pairs[k - 1].1).abs();
        let same = (pairs[k].0 - pairs[k - 1].0).abs() < half && (pairs[k].1 - pairs[k - 1].1).abs() < half;
        segment[k] = segment[k - 1] + usize::from(!same);
    }
    let d = |k: usize| (pairs[k].0 - pairs[k].1).abs();
    let model = family.model();
    Ok((0..pairs.len())
        .map(|k| {
            let prev = (k > 0 && segment[k - 1] == segment[k]).then(|| k - 1);
            let next = (k + 1 < pairs.len() && segment[k + 1] == segment[k]).then_some(k + 1);
            let (a, b) = match (prev, next) {
                (Some(p), Some(n)) => (p, n),
                (Some(p), None) => (p, k),
                (None, Some(n)) => (k, n),
                (None, None) => (k, k),
            };
            let fd = (a != b).then(|| (d(b) - d(a)) / (gammas[b] - gammas[a]));
            let (ri, rj) = pairs[k];
            let truncated = truncated_response(model, ri) - truncated_response(model, rj);
            FlowRow {
                gamma: gammas[k],
                r_i: ri,
                r_j: rj,
                d_jumps: d(k),
                dd_dgamma_fd: fd,
                dd_dgamma_paper: truncated,
                discrepancy: fd.map(|f| truncated / f),
                segment: segment[k],
            }
        })
        .collect())
}

pub fn flow_table(rows: &[FlowRow]) -> Table {
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let mut t = Table::new(&["gamma", "r_i", "r_j", "d_jumps", "dd_dgamma_fd", "dd_dgamma_paper", "discrepancy"]);
    for r in rows {
        t.push(vec![
            num(r.gamma),
            num(r.r_i),
            num(r.r_j),
            num(r.d_jumps),
            opt(r.dd_dgamma_fd),
            num(r.dd_dgamma_paper),
            opt(r.discrepancy),
        ]);
    }
    t
}

/// A curvature weight times a Gaussian bump,
/// `a = (1 + γ L⁴ C²)(1 + A exp(-((r - c)/w)²))`. The bump plants an extra
/// barrier in the interior; used to exercise multi-branch machinery on
/// backgrounds whose own weight never produces one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedBarrier {
    pub base: GeneralizedProfile,
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

impl PlantedBarrier {
    pub fn new(base: GeneralizedProfile, amplitude: f64, center: f64, width: f64) -> Self {
        Self { base, amplitude, center, width }
    }

    fn bump(&self, r: f64) -> (f64, f64) {
        let z = (r - self.center) / self.width;
        let e = self.amplitude * (-z * z).exp();
        (1.0 + e, -2.0 * z / self.width * e)
    }
}

impl RadialWeight for PlantedBarrier {
    fn model(&self) -> &BulkModel {
        &self.base.model
    }

    fn weight(&self, r: f64) -> f64 {
        self.base.weight(r) * self.bump(r).0
    }

    fn weight_derivative(&self, r: f64) -> f64 {
        let (b, db) = self.bump(r);
        self.base.weight_derivative(r) * b + self.base.weight(r) * db
    }
}

impl GammaFamily for PlantedBarrier {
    fn gamma(&self) -> f64 {
        self.base.gamma
    }

    fn with_gamma(&self, gamma: f64) -> Self {
        Self { base: self.base.with_gamma(gamma), ..*self }
    }

    fn weight_gamma_derivative(&self, r: f64) -> f64 {
        self.base.weight_gamma_derivative(r) * self.bump(r).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planar() -> BulkModel {
        BulkModel::planar(4, 1.0, 1.0).unwrap()
    }

    struct Planted;

    impl BranchOracle for Planted {
        fn dominant(&self, tau: f64) -> Option<CurvePoint> {
            let branch = usize::from(tau >= 3.0);
            let cgr = if branch == 0 { 0.5 } else { 0.7 };
            Some(CurvePoint { tau, cgr, branch, segment: 0, p_v: cgr, r_min: 0.5, complexity: 0.0 })
        }

        fn barrier(&self, branch: usize) -> Option<(f64, f64)> {
            Some(if branch == 0 { (0.8, 0.25) } else { (0.4, 0.49) })
        }
    }

    #[test]
    fn planted_switch_is_located() {
        let points = (0..=20).map(|k| Planted.dominant(0.37 * k as f64).unwrap()).collect();
        let curve = CgrCurve { points, prefactor: 1.0, holes: vec![] };
        let ev = detect_jumps(&curve, &Planted, 1e-6);
        assert_eq!(ev.len(), 1);
        assert!((ev[0].tau_star - 3.0).abs() < 1e-6);
        assert!(ev[0].bracket.0 < 3.0 && ev[0].bracket.1 >= 3.0);
        assert!((ev[0].delta_cgr - 0.2).abs() < 1e-12);
        assert!((ev[0].barrier_delta.unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn smooth_curve_has_no_jumps() {
        let points = (0..10)
            .map(|k| CurvePoint { tau: k as f64, cgr: 0.1, branch: 0, segment: 0, p_v: 0.1, r_min: 0.9, complexity: 0.0 })
            .collect();
        let curve = CgrCurve { points, prefactor: 1.0, holes: vec![] };
        assert!(detect_jumps(&curve, &Planted, 1e-6).is_empty());
    }

    #[test]
    fn degenerate_range() {
        assert!(matches!(auto_scan_double_barrier(&planar(), 0.1, 0.1), Err(LabError::DegenerateRange { .. })));
    }

    #[test]
    fn cv_has_a_single_barrier() {
        assert_eq!(barrier_count(&GeneralizedProfile::new(planar(), 0.0), functional::DEFAULT_GRID).unwrap(), 1);
    }

    #[test]
    fn gamma_independent_potential_does_not_move() {
        let c = 0.6;
        let (s, slope) = ift_sensitivity(|r, _g| -2.0 * (r - c), c, 0.3, 1e-6, 1e-6).unwrap();
        assert_eq!(s, 0.0);
        assert!((slope + 2.0).abs() < 1e-9);
    }

    #[test]
    fn flat_gradient_is_degenerate() {
        // G = (r - c)² has a double root
        let r = ift_sensitivity(|r, g| (r - 0.6).powi(2) + 0.0 * g, 0.6, 0.0, 1e-6, 1e-6);
        assert!(matches!(r, Err(LabError::DegenerateCritical { .. })));
    }

    #[test]
    fn cv_barrier_response_matches_difference() {
        let p = GeneralizedProfile::new(planar(), 0.0);
        let cp = functional::interior_maxima(&p, 0.05, functional::DEFAULT_GRID).unwrap()[0];
        let s = sensitivity(&p, &cp, SensitivityOptions::default()).unwrap();
        assert!(s.discrepancy_fd < 1e-3, "{s:?}");
        // the barrier moves inward as the coupling grows
        assert!(s.dri_dgamma_ift < 0.0);
    }

    #[test]
    fn merger_is_degenerate() {
        let p = GeneralizedProfile::new(planar(), 0.0);
        let m = barrier_merger(&p, 1e-6, 1e-2).unwrap();
        assert!(m.gamma > 2e-4 && m.gamma < 2.5e-4, "{m:?}");
        let w = p.with_gamma(m.gamma);
        let r = sensitivity(&w, &m.critical_point(), SensitivityOptions::default());
        assert!(matches!(r, Err(LabError::DegenerateCritical { .. })), "{r:?}");
        let g = |r: f64, gm: f64| potential_gradient(&p.with_gamma(gm), r);
        assert!(ift_sensitivity(g, m.r, m.gamma, 1e-9, 1e-8).is_err());
    }

    #[test]
    fn planted_bump_adds_a_barrier() {
        let w = PlantedBarrier::new(GeneralizedProfile::new(planar(), 0.0), 2.5, 0.45, 0.05);
        assert_eq!(barrier_count(&w, functional::DEFAULT_GRID).unwrap(), 2);
        let h = 1e-6;
        for r in [0.4, 0.45, 0.6] {
            let fd = (w.weight(r + h) - w.weight(r - h)) / (2.0 * h);
            assert!((fd - w.weight_derivative(r)).abs() < 1e-6 * fd.abs().max(1.0));
        }
    }

    #[test]
    fn single_point_flow_has_no_derivative() {
        let w = PlantedBarrier::new(GeneralizedProfile::new(planar(), 0.0), 2.5, 0.45, 0.05);
        let rows = jump_distance_flow(&w, &[0.0]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].dd_dgamma_fd.is_none());
        assert!(rows[0].d_jumps > 0.3);
        let csv = flow_table(&rows).to_csv().unwrap();
        assert!(csv.starts_with("gamma,r_i,r_j,d_jumps,dd_dgamma_fd,dd_dgamma_paper,discrepancy\n"));
    }
}
