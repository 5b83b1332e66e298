//! Bracketed scalar root finding.

use crate::error::{LabError, Result};

pub const MAX_BISECTIONS: usize = 200;

/// Bisection on `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign. Stops
/// when the bracket is narrower than `x_tol` or `|f| <= f_tol`.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
    f_tol: f64,
) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(LabError::Root(format!(
            "no sign change on [{lo:.12e}, {hi:.12e}] (f = {flo:.3e}, {fhi:.3e})"
        )));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid.abs() <= f_tol || (hi - lo).abs() <= x_tol {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection on a boolean predicate that is `false` at `lo` and `true` at
/// `hi`; returns the bracket `(last false, first true)` once narrower than
/// `x_tol`.
pub fn bisect_predicate<P: FnMut(f64) -> bool>(
    mut pred: P,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
) -> (f64, f64) {
    for _ in 0..MAX_BISECTIONS {
        if (hi - lo).abs() <= x_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Illinois variant of regula falsi; converges superlinearly on smooth
/// monotone brackets while keeping the bracket guarantee.
pub fn illinois<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    x_tol: f64,
) -> Result<f64> {
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(LabError::Root(format!("no sign change on [{a:.12e}, {b:.12e}]")));
    }
    let mut side = 0i8;
    for _ in 0..MAX_BISECTIONS {
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !c.is_finite() || c <= a.min(b) || c >= a.max(b) {
            c = 0.5 * (a + b);
        }
        let fc = f(c)?;
        if fc == 0.0 || (b - a).abs() <= x_tol {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() <= x_tol {
            return Ok(0.5 * (a + b));
        }
    }
    Ok(0.5 * (a + b))
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 0.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 0.0).is_err());
    }

    #[test]
    fn predicate_bracket() {
        let (lo, hi) = bisect_predicate(|x| x > 0.3, 0.0, 1.0, 1e-9);
        assert!(lo <= 0.3 && hi > 0.3 && hi - lo <= 1e-9);
    }

    #[test]
    fn illinois_converges() {
        let r = illinois(|x| Ok(x.exp() - 3.0), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn golden_section() {
        let (x, v) = golden_max(|x| -(x - 0.7) * (x - 0.7) + 1.0, 0.0, 2.0, 1e-10);
        assert!((x - 0.7).abs() < 1e-8 && (v - 1.0).abs() < 1e-12);
    }
}
