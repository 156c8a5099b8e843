use std::f64::consts::PI;

use super::roots::{bisect, Tolerances};
use crate::error::{domain, Result};

const TAIL_FROM: f64 = 2.0;

fn ln_density(x: f64) -> f64 {
    -0.5 * x * x - 0.5 * (2.0 * PI).ln()
}

/// ln of the continued fraction `x + 1/(x + 2/(x + 3/(x + ...)))`, x >= 2.
fn ln_mills_denominator(x: f64) -> f64 {
    let mut tail = x;
    for k in (1..=300).rev() {
        tail = x + k as f64 / tail;
    }
    tail.ln()
}

/// `Phi(x) - 1/2` from the positive series `phi(x) sum x^(2k+1) / (2k+1)!!`.
fn centered_cdf(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for k in 1..200 {
        term *= x2 / (2 * k + 1) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    ln_density(x).exp() * sum
}

/// Standard normal upper tail `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    if x >= TAIL_FROM {
        log_q_function(x).exp()
    } else if x > -TAIL_FROM {
        0.5 - centered_cdf(x)
    } else {
        1.0 - q_function(-x)
    }
}

/// Natural log of `Q(x)`, finite for all finite `x`.
pub fn log_q_function(x: f64) -> f64 {
    if x >= TAIL_FROM {
        ln_density(x) - ln_mills_denominator(x)
    } else {
        q_function(x).ln()
    }
}

/// Inverse of `Q` on `(0, 1/2]`, returning `x >= 0`.
pub fn q_inverse(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(domain("p", p, "(0, 1/2]"));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let target = p.ln();
    bisect(
        |x| log_q_function(x) - target,
        0.0,
        40.0,
        &Tolerances::exhaustive(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_median() {
        assert_eq!(q_function(0.0), 0.5);
        for x in [0.3, 1.0, 2.5] {
            assert!((q_function(-x) - (1.0 - q_function(x))).abs() < 1e-15);
        }
    }

    #[test]
    fn continuous_across_switch() {
        let below = q_function(TAIL_FROM * (1.0 - 1e-15));
        let above = q_function(TAIL_FROM);
        assert!((above / below - 1.0).abs() < 1e-13);
    }

    #[test]
    fn log_tail_far_out() {
        // Q(40) ~ 3.66e-350 underflows, its log does not
        let lq = log_q_function(40.0);
        let leading = -800.0 - (40.0 * (2.0 * PI).sqrt()).ln();
        assert!((lq - leading).abs() < 1e-3);
    }

    #[test]
    fn inverse_round_trip() {
        for p in [0.4, 0.1740, 1e-5, 1e-100] {
            let x = q_inverse(p).unwrap();
            assert!((log_q_function(x) - p.ln()).abs() < 1e-12 * p.ln().abs().max(1.0));
        }
        assert!(q_inverse(0.6).is_err());
    }
}
