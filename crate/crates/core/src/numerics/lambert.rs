use super::entropy::ln_excess;
use crate::error::{domain, Result};

/// Solves `s - ln(1 + s) = t` for `s >= 0`.
///
/// With `x = -exp(-1 - t)` this is `s = -1 - W_L(x)`; working with `t`
/// instead of `x` avoids the cancellation in `1 + ln(-x)` near the branch
/// point. Newton's method started above the root decreases monotonically
/// because the left side is convex and increasing.
pub fn log1p_excess_inv(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(domain("t", t, ">= 0"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if t.is_infinite() {
        return Ok(f64::INFINITY);
    }
    // s^2 / (2(1+s)) <= s - ln(1+s) puts the root below this point.
    let mut s = t + (t * t + 2.0 * t).sqrt();
    for _ in 0..100 {
        let step = (ln_excess(s) - t) * (1.0 + s) / s;
        let next = s - step;
        if !(next < s) || next <= 0.0 {
            break;
        }
        s = next;
        if step <= 4.0 * f64::EPSILON * s {
            break;
        }
    }
    Ok(s)
}

/// Lower real branch `W_L(x) <= -1` of the Lambert W function.
pub fn lambert_w_lower(x: f64) -> Result<f64> {
    let branch = -(-1.0f64).exp();
    if !(x >= branch * (1.0 + f64::EPSILON) && x < 0.0) {
        return Err(domain("x", x, "[-1/e, 0)"));
    }
    let t = -1.0 - (-x).ln();
    if t <= 0.0 {
        return Ok(-1.0);
    }
    Ok(-1.0 - log1p_excess_inv(t)?)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::E;

    use super::*;

    fn residual(w: f64, x: f64) -> f64 {
        w * w.exp() - x
    }

    #[test]
    fn branch_point() {
        assert_eq!(lambert_w_lower(-1.0 / E).unwrap(), -1.0);
    }

    #[test]
    fn reference_values() {
        assert!((lambert_w_lower(-0.1).unwrap() + 3.577_152_063_957_297).abs() < 1e-12);
        assert!((lambert_w_lower(-0.3).unwrap() + 1.781_337_023_421_628).abs() < 1e-12);
    }

    #[test]
    fn residuals_small() {
        for k in 0..200 {
            let top = (1.0 / E).log10();
            let x = -10f64.powf(-12.0 + (top + 12.0) * k as f64 / 200.0);
            let w = lambert_w_lower(x).unwrap();
            assert!(w <= -1.0);
            assert!(residual(w, x).abs() <= 1e-12, "x={x} w={w}");
        }
    }

    #[test]
    fn domain_checked() {
        assert!(lambert_w_lower(0.0).is_err());
        assert!(lambert_w_lower(-0.5).is_err());
        assert!(log1p_excess_inv(-1.0).is_err());
    }

    #[test]
    fn inverse_small_argument() {
        let t = 1e-20;
        let s = log1p_excess_inv(t).unwrap();
        assert!((s / (2.0 * t).sqrt() - 1.0).abs() < 1e-9);
    }
}
