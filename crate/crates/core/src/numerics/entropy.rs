use std::f64::consts::LN_2;

use super::roots::{bisect, Tolerances};
use crate::error::{domain, Result};

const SERIES_CUTOFF: f64 = 0.05;

/// `(1 + x) ln(1 + x) - x`, accurate near `x = 0`.
pub(crate) fn xlogx_excess(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        // sum_{k>=2} (-1)^k x^k / (k (k - 1))
        let mut term = x * x;
        let mut sum = 0.0;
        for k in 2..40 {
            let kf = k as f64;
            let add = term / (kf * (kf - 1.0));
            sum += if k % 2 == 0 { add } else { -add };
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
            term *= x;
        }
        sum
    } else if x == -1.0 {
        1.0
    } else {
        (1.0 + x) * x.ln_1p() - x
    }
}

/// `t - ln(1 + t)`, accurate near `t = 0`.
pub(crate) fn ln_excess(t: f64) -> f64 {
    if t.abs() < SERIES_CUTOFF {
        let mut term = t * t;
        let mut sum = 0.0;
        for k in 2..40 {
            let add = term / k as f64;
            sum += if k % 2 == 0 { add } else { -add };
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
            term *= t;
        }
        sum
    } else {
        t - t.ln_1p()
    }
}

fn check_probability(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain(name, x, "[0, 1]"))
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_probability("x", x)?;
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-(x * x.ln() + (1.0 - x) * (-x).ln_1p()) / LN_2)
}

/// Inverse of the binary entropy on `[0, 1/2]`, by bisection to full precision.
pub fn binary_entropy_inv(y: f64) -> Result<f64> {
    check_probability("y", y)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(0.5);
    }
    bisect(
        |x| binary_entropy(x).map_or(f64::NAN, |h| h - y),
        0.0,
        0.5,
        &Tolerances::exhaustive(),
    )
}

/// Bernoulli KL divergence `D(g || p)` in bits.
///
/// Each half is evaluated as `p * xlogx_excess((g - p) / p)` so that the
/// value keeps full relative precision when `g` is close to `p`.
pub fn kl_bernoulli(g: f64, p: f64) -> Result<f64> {
    check_probability("g", g)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("p", p, "(0, 1)"));
    }
    if g == 0.0 {
        return Ok(-(-p).ln_1p() / LN_2);
    }
    if g == 1.0 {
        return Ok(-p.ln() / LN_2);
    }
    let q = 1.0 - p;
    let half = |a: f64, b: f64| {
        // b * xlogx_excess((a - b) / b) without overflowing for tiny b
        let x = (a - b) / b;
        if x.abs() < SERIES_CUTOFF {
            b * xlogx_excess(x)
        } else {
            a * (a.ln() - b.ln()) - (a - b)
        }
    };
    let d = half(g, p) + half(1.0 - g, q);
    Ok(d.max(0.0) / LN_2)
}

/// Gaussian KL divergence between zero-mean variances, in nats.
pub fn kl_gaussian_var(var_g: f64, var_p: f64) -> Result<f64> {
    if !(var_g > 0.0) {
        return Err(domain("var_g", var_g, "> 0"));
    }
    if !(var_p > 0.0) {
        return Err(domain("var_p", var_p, "> 0"));
    }
    Ok(0.5 * ln_excess(var_g / var_p - 1.0))
}

/// Elementary bounds on `h_b` and its inverse, parametrized by `d > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbBounds {
    /// `2x <= h_b(x)`
    pub entropy_lower: f64,
    /// `h_b(x) <= 2 x^(1-1/d) d / ln 2`
    pub entropy_upper: f64,
    /// `(y ln2 / 2d)^(d/(d-1)) <= h_b^{-1}(y)`
    pub inverse_lower: f64,
    /// `h_b^{-1}(y) <= y / 2`
    pub inverse_upper: f64,
}

pub fn hb_bound_pair(x: f64, y: f64, d: f64) -> Result<HbBounds> {
    if !(0.0..=0.5).contains(&x) {
        return Err(domain("x", x, "[0, 1/2]"));
    }
    check_probability("y", y)?;
    if !(d > 1.0) || !d.is_finite() {
        return Err(domain("d", d, "finite and > 1"));
    }
    let e = d / (d - 1.0);
    Ok(HbBounds {
        entropy_lower: 2.0 * x,
        entropy_upper: 2.0 * x.powf(1.0 - 1.0 / d) * d / LN_2,
        inverse_lower: y.powf(e) * (LN_2 / (2.0 * d)).powf(e),
        inverse_upper: y / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!((binary_entropy(0.11).unwrap() - 0.499_915_958).abs() < 1e-8);
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn inverse_values() {
        assert_eq!(binary_entropy_inv(1.0).unwrap(), 0.5);
        assert_eq!(binary_entropy_inv(0.0).unwrap(), 0.0);
        assert!((binary_entropy_inv(0.5).unwrap() - 0.110_027_864).abs() < 1e-8);
        assert!(binary_entropy_inv(-0.1).is_err());
    }

    #[test]
    fn inverse_tiny_argument_keeps_relative_precision() {
        for y in [1e-15, 1e-10, 1e-5] {
            let x = binary_entropy_inv(y).unwrap();
            let back = binary_entropy(x).unwrap();
            assert!((back - y).abs() <= 1e-12 * y, "{y} {back}");
        }
    }

    #[test]
    fn kl_values() {
        assert_eq!(kl_bernoulli(0.3, 0.3).unwrap(), 0.0);
        assert!((kl_bernoulli(1.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        let direct = 0.2 * (2.0f64).log2() + 0.8 * (0.8f64 / 0.9).log2();
        assert!((kl_bernoulli(0.2, 0.1).unwrap() - direct).abs() < 1e-15);
        assert!((direct - 0.0641).abs() < 1e-4);
        assert!(kl_bernoulli(0.2, 0.0).is_err());
        assert!(kl_bernoulli(0.2, 1.0).is_err());
    }

    #[test]
    fn kl_small_separation_is_quadratic() {
        let (g, p) = (0.3, 0.3 + 1e-9);
        let approx = (g - p) * (g - p) / (2.0 * p * (1.0 - p) * LN_2);
        let d = kl_bernoulli(g, p).unwrap();
        assert!((d / approx - 1.0).abs() < 1e-6);
    }

    #[test]
    fn kl_tiny_crossover_does_not_overflow() {
        let d = kl_bernoulli(0.2, 1e-250).unwrap();
        let direct = 0.2 * (0.2f64.log2() + 250.0 * 10f64.log2()) + 0.8 * 0.8f64.log2();
        assert!((d / direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_kl_values() {
        assert_eq!(kl_gaussian_var(2.0, 2.0).unwrap(), 0.0);
        assert!((kl_gaussian_var(2.0, 1.0).unwrap() - 0.5 * (1.0 - LN_2)).abs() < 1e-15);
        assert!((kl_gaussian_var(1.0, 2.0).unwrap() - 0.5 * (-0.5 + LN_2)).abs() < 1e-15);
        assert!(kl_gaussian_var(0.0, 1.0).is_err());
        assert!(kl_gaussian_var(1.0, -1.0).is_err());
    }

    #[test]
    fn series_match_closed_forms_at_cutoff() {
        for x in [-0.049_999, 0.049_999] {
            let closed = (1.0 + x) * f64::ln_1p(x) - x;
            assert!((xlogx_excess(x) / closed - 1.0).abs() < 1e-12);
            let closed = x - f64::ln_1p(x);
            assert!((ln_excess(x) / closed - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_pair_endpoints() {
        let b = hb_bound_pair(0.0, 1.0, 3.0).unwrap();
        assert_eq!(b.entropy_lower, 0.0);
        assert_eq!(b.inverse_upper, 0.5);
        assert!(hb_bound_pair(0.6, 0.5, 2.0).is_err());
        assert!(hb_bound_pair(0.1, 0.5, 1.0).is_err());
    }
}
