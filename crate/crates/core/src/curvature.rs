//! Finite-difference curvature of diagonal metrics.
//!
//! Christoffel symbols are built from central differences of the metric
//! components and the Riemann tensor from central differences of those
//! Christoffel symbols (nested differencing). Every derivative is
//! Richardson-extrapolated. Nothing here knows any closed form, which is what
//! makes it usable as an independent check on the analytic curvature scalars.

use crate::error::{LabError, Result};

/// A metric that is diagonal in its coordinate chart.
pub trait DiagonalMetric {
    fn dim(&self) -> usize;
    /// Diagonal components `g_aa` at coordinates `x`.
    fn components(&self, x: &[f64]) -> Vec<f64>;
    /// Finite-difference step for coordinate `a` at `x`.
    fn step(&self, x: &[f64], a: usize, rel: f64) -> f64;
}

/// Step control for the nested differencing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPolicy {
    /// step relative to the coordinate scale
    pub rel: f64,
    /// Richardson levels beyond the plain central difference
    pub richardson: usize,
}

impl Default for StepPolicy {
    fn default() -> Self {
        Self { rel: 2e-2, richardson: 3 }
    }
}

fn richardson_derivative<F: FnMut(f64) -> Vec<f64>>(
    mut f: F,
    h: f64,
    levels: usize,
) -> Vec<f64> {
    // table[k] holds the central difference with step h / 2^k
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels + 1);
    for k in 0..=levels {
        let hk = h / f64::powi(2.0, k as i32);
        let plus = f(hk);
        let minus = f(-hk);
        table.push(plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * hk)).collect());
    }
    for level in 1..=levels {
        let factor = f64::powi(4.0, level as i32);
        for k in (level..=levels).rev() {
            let refined: Vec<f64> = table[k]
                .iter()
                .zip(&table[k - 1])
                .map(|(fine, coarse)| (factor * fine - coarse) / (factor - 1.0))
                .collect();
            table[k] = refined;
        }
    }
    table.pop().unwrap_or_default()
}

/// Curvature data at one point.
#[derive(Debug, Clone)]
pub struct Curvature {
    pub metric: Vec<f64>,
    /// `riemann[a][b][c][d] = R_abcd` (all indices down)
    pub riemann: Vec<f64>,
    pub ricci: Vec<f64>,
    pub ricci_scalar: f64,
    n: usize,
}

impl Curvature {
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.n + b) * self.n + c) * self.n + d
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn riemann_lower(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.riemann[self.idx(a, b, c, d)]
    }

    pub fn ricci(&self, a: usize, b: usize) -> f64 {
        self.ricci[a * self.n + b]
    }

    /// `R_abcd R^abcd`.
    pub fn kretschmann(&self) -> f64 {
        self.full_square(|a, b, c, d| self.riemann_lower(a, b, c, d))
    }

    /// Weyl tensor component `C_abcd`.
    pub fn weyl(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.n as f64;
        let g = |i: usize, j: usize| if i == j { self.metric[i] } else { 0.0 };
        let ric = |i: usize, j: usize| self.ricci(i, j);
        self.riemann_lower(a, b, c, d)
            - (g(a, c) * ric(b, d) - g(a, d) * ric(b, c) - g(b, c) * ric(a, d) + g(b, d) * ric(a, c))
                / (n - 2.0)
            + self.ricci_scalar * (g(a, c) * g(b, d) - g(a, d) * g(b, c)) / ((n - 1.0) * (n - 2.0))
    }

    /// `C_abcd C^abcd`.
    pub fn weyl_squared(&self) -> f64 {
        self.full_square(|a, b, c, d| self.weyl(a, b, c, d))
    }

    fn full_square<F: Fn(usize, usize, usize, usize) -> f64>(&self, t: F) -> f64 {
        let n = self.n;
        let inv: Vec<f64> = self.metric.iter().map(|g| 1.0 / g).collect();
        let mut sum = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = t(a, b, c, d);
                        if v != 0.0 {
                            sum += v * v * inv[a] * inv[b] * inv[c] * inv[d];
                        }
                    }
                }
            }
        }
        sum
    }
}

/// Christoffel symbols `Γ^a_bc`, flattened as `(a * n + b) * n + c`.
pub fn christoffel<M: DiagonalMetric + ?Sized>(metric: &M, x: &[f64], policy: StepPolicy) -> Vec<f64> {
    let n = metric.dim();
    let g = metric.components(x);
    // dg[c * n + a] = ∂_c g_aa
    let mut dg = vec![0.0; n * n];
    for c in 0..n {
        let h = metric.step(x, c, policy.rel);
        let deriv = richardson_derivative(
            |dh| {
                let mut y = x.to_vec();
                y[c] += dh;
                metric.components(&y)
            },
            h,
            policy.richardson,
        );
        dg[c * n..(c + 1) * n].copy_from_slice(&deriv);
    }
    let mut gamma = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut s = 0.0;
                if a == c {
                    s += dg[b * n + a];
                }
                if a == b {
                    s += dg[c * n + a];
                }
                if b == c {
                    s -= dg[a * n + b];
                }
                gamma[(a * n + b) * n + c] = 0.5 * s / g[a];
            }
        }
    }
    gamma
}

/// Full curvature at `x` by nested finite differences.
pub fn curvature_at<M: DiagonalMetric + ?Sized>(
    metric: &M,
    x: &[f64],
    policy: StepPolicy,
) -> Result<Curvature> {
    let n = metric.dim();
    if x.len() != n {
        return Err(LabError::Domain(format!("expected {n} coordinates, got {}", x.len())));
    }
    let g = metric.components(x);
    if g.iter().any(|v| !v.is_finite() || *v == 0.0) {
        return Err(LabError::Domain("degenerate metric at sample point".into()));
    }
    let gamma = christoffel(metric, x, policy);
    // dgamma[e][(a*n+b)*n+c] = ∂_e Γ^a_bc
    let mut dgamma = Vec::with_capacity(n);
    for e in 0..n {
        let h = metric.step(x, e, policy.rel);
        if !(h.is_finite() && h > f64::EPSILON * x[e].abs().max(1.0)) {
            return Err(LabError::Numerical(format!("finite-difference step underflow in coordinate {e}")));
        }
        dgamma.push(richardson_derivative(
            |dh| {
                let mut y = x.to_vec();
                y[e] += dh;
                christoffel(metric, &y, policy)
            },
            h,
            policy.richardson,
        ));
    }
    let gi = |a: usize, b: usize, c: usize| gamma[(a * n + b) * n + c];
    let dgi = |e: usize, a: usize, b: usize, c: usize| dgamma[e][(a * n + b) * n + c];
    let mut riemann = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut up = dgi(c, a, d, b) - dgi(d, a, c, b);
                    for e in 0..n {
                        up += gi(a, c, e) * gi(e, d, b) - gi(a, d, e) * gi(e, c, b);
                    }
                    riemann[((a * n + b) * n + c) * n + d] = g[a] * up;
                }
            }
        }
    }
    let mut ricci = vec![0.0; n * n];
    for b in 0..n {
        for d in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                s += riemann[((a * n + b) * n + a) * n + d] / g[a];
            }
            ricci[b * n + d] = s;
        }
    }
    let ricci_scalar = (0..n).map(|b| ricci[b * n + b] / g[b]).sum();
    Ok(Curvature { metric: g, riemann, ricci, ricci_scalar, n })
}

/// Product metric `-dt² + radius² dΩ²_{k}` (a static Einstein universe when
/// `k = d - 1`) or flat Minkowski space when `radius` is `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticBoundary {
    pub spatial_dim: usize,
    pub sphere_radius: Option<f64>,
}

impl DiagonalMetric for StaticBoundary {
    fn dim(&self) -> usize {
        self.spatial_dim + 1
    }

    fn components(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![-1.0];
        match self.sphere_radius {
            None => g.extend(std::iter::repeat_n(1.0, self.spatial_dim)),
            Some(radius) => g.extend(sphere_components(radius * radius, &x[1..])),
        }
        g
    }

    fn step(&self, _x: &[f64], _a: usize, rel: f64) -> f64 {
        rel
    }
}

/// Round-sphere metric components `scale · (1, sin²θ₁, sin²θ₁ sin²θ₂, ...)`.
pub fn sphere_components(scale: f64, angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    let mut factor = scale;
    for (k, _) in angles.iter().enumerate() {
        out.push(factor);
        if k + 1 < angles.len() {
            let s = angles[k].sin();
            factor *= s * s;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_space_has_no_curvature() {
        let m = StaticBoundary { spatial_dim: 3, sphere_radius: None };
        let c = curvature_at(&m, &[0.0, 0.3, 0.2, 0.1], StepPolicy::default()).unwrap();
        assert_eq!(c.kretschmann(), 0.0);
        assert_eq!(c.ricci_scalar, 0.0);
    }

    #[test]
    fn two_sphere_gaussian_curvature() {
        struct S2(f64);
        impl DiagonalMetric for S2 {
            fn dim(&self) -> usize {
                2
            }
            fn components(&self, x: &[f64]) -> Vec<f64> {
                sphere_components(self.0 * self.0, x)
            }
            fn step(&self, _x: &[f64], _a: usize, rel: f64) -> f64 {
                rel
            }
        }
        let c = curvature_at(&S2(2.0), &[1.1, 0.4], StepPolicy::default()).unwrap();
        // R = 2/a² for a 2-sphere of radius a
        assert!((c.ricci_scalar - 0.5).abs() < 1e-9, "{}", c.ricci_scalar);
    }

    #[test]
    fn einstein_static_universe_ricci() {
        let m = StaticBoundary { spatial_dim: 3, sphere_radius: Some(1.0) };
        let x = [0.0, 1.1, 0.9, 0.3];
        let c = curvature_at(&m, &x, StepPolicy::default()).unwrap();
        // S³ of unit radius: R_ij = 2 g_ij, R = 6, no time curvature
        assert!((c.ricci_scalar - 6.0).abs() < 1e-8);
        assert!(c.ricci(0, 0).abs() < 1e-9);
        assert!((c.ricci(1, 1) - 2.0 * c.metric[1]).abs() < 1e-8);
        // conformally flat
        assert!(c.weyl_squared().abs() < 1e-8);
    }
}
