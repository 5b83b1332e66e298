//! Adaptive Gauss-Kronrod quadrature (21-point Kronrod extension of the
//! 10-point Gauss rule) with a global error queue, plus fixed Gauss-Legendre
//! rules for short smooth panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{LabError, Result};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525452125,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let err = rescale_error((res_k - res_g) * half, res_abs * half.abs(), res_asc * half.abs());
    (value, err)
}

/// Adaptive integrator configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-11, max_panels: 2000 }
    }
}

impl Integrator {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    /// Integrates `f` over `[a, b]`. The rule never samples the endpoints, so
    /// integrable endpoint singularities are tolerated.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Estimate> {
        self.integrate_with_breaks(f, &[a, b])
    }

    /// Integrates over consecutive panels `[breaks[i], breaks[i+1]]`; breaks
    /// should sit at known kinks or near-singular points of the integrand.
    pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        breaks: &[f64],
    ) -> Result<Estimate> {
        if breaks.len() < 2 {
            return Err(LabError::Domain("quadrature needs at least two break points".into()));
        }
        let mut heap = BinaryHeap::new();
        let mut total = 0.0;
        let mut total_err = 0.0;
        let mut evals = 0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a == b {
                continue;
            }
            let (value, error) = kronrod21(&mut f, a, b);
            evals += 21;
            total += value;
            total_err += error;
            heap.push(Panel { a, b, value, error });
        }
        if !total.is_finite() || !total_err.is_finite() {
            return Err(LabError::Quadrature { estimate: total, error: total_err });
        }
        let tol = |v: f64| self.abs_tol.max(self.rel_tol * v.abs());
        while total_err > tol(total) {
            if heap.len() >= self.max_panels {
                return Err(LabError::Quadrature { estimate: total, error: total_err });
            }
            let worst = match heap.pop() {
                Some(p) => p,
                None => break,
            };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
                // interval can no longer be split in floating point
                heap.push(worst);
                return Err(LabError::Quadrature { estimate: total, error: total_err });
            }
            let (v1, e1) = kronrod21(&mut f, worst.a, mid);
            let (v2, e2) = kronrod21(&mut f, mid, worst.b);
            evals += 42;
            total += v1 + v2 - worst.value;
            total_err += e1 + e2 - worst.error;
            if !total.is_finite() {
                return Err(LabError::Quadrature { estimate: total, error: f64::INFINITY });
            }
            heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
            heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        }
        // re-sum to shed accumulated update roundoff
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        Ok(Estimate { value, error, evals })
    }

    /// Integrates over `[a, ∞)` using `x = a + t/(1-t)`.
    pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64) -> Result<Estimate> {
        self.integrate(
            |t| {
                let one_minus = 1.0 - t;
                let x = a + t / one_minus;
                let jac = 1.0 / (one_minus * one_minus);
                let v = f(x) * jac;
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            },
            0.0,
            1.0,
        )
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed Gauss-Legendre rule mapped onto `[a, b]`.
#[derive(Debug, Clone)]
pub struct FixedRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl FixedRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
    }

    /// Node positions on `[0, 1]` with matching weights.
    pub fn unit_nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = Integrator::default();
        let est = q.integrate(|x| 3.0 * x * x + 1.0, 0.0, 2.0).unwrap();
        assert!((est.value - 10.0).abs() < 1e-13);
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let q = Integrator::new(1e-12, 1e-10);
        let est = q.integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0).unwrap();
        assert!((est.value - 2.0).abs() < 1e-9, "{}", est.value);
    }

    #[test]
    fn half_infinite_range() {
        let q = Integrator::default();
        let est = q.integrate_to_infinity(|x| 1.0 / (x * x), 1.0).unwrap();
        assert!((est.value - 1.0).abs() < 1e-11);
        let est = q.integrate_to_infinity(|x| (-x).exp(), 0.0).unwrap();
        assert!((est.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn non_integrable_reports_failure() {
        let q = Integrator { max_panels: 50, ..Integrator::default() };
        let err = q.integrate(|x| 1.0 / x, 0.0, 1.0).unwrap_err();
        assert!(matches!(err, LabError::Quadrature { .. }));
    }

    #[test]
    fn gauss_legendre_weights_and_moments() {
        for n in [1, 2, 4, 7, 15] {
            let (x, w) = gauss_legendre(n);
            let sum: f64 = w.iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "n={n}");
            // exact through degree 2n-1
            let deg = 2 * n - 1;
            let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((m - exact).abs() < 1e-12, "n={n} m={m}");
        }
        let rule = FixedRule::new(15);
        let v = rule.integrate(|x| x.sin(), 0.0, 1.0);
        assert!((v - (1.0 - 1f64.cos())).abs() < 1e-15);
    }
}
