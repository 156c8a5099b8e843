use std::f64::consts::LN_2;

use super::entropy::{binary_entropy, kl_bernoulli};
use super::roots::{golden_section_min, Tolerances};
use crate::error::{domain, Result};

const K_GRID: usize = 10_000;
const K_SPAN: f64 = 1e-9;

/// Largest `rho` searched by [`error_exponent_sphere`].
pub const SPHERE_RHO_CAP: f64 = 1e4;

fn chernoff_ratio(g: f64, eta: f64) -> f64 {
    let shifted = (g + eta).min(1.0);
    // the representable step, so rounding of g + eta does not leak into the ratio
    let step = shifted - g;
    kl_bernoulli(shifted, g).unwrap_or(f64::NAN) / (step * step)
}

fn refine_k(g: f64, ln_lo: f64, ln_hi: f64) -> (f64, f64) {
    let tol = Tolerances::new(1e-13, 1e-13, 200).unwrap();
    let (ln_eta, k) = golden_section_min(|u| chernoff_ratio(g, u.exp()), ln_lo, ln_hi, &tol);
    (k, ln_eta.exp())
}

/// `K(g)` from a `points`-long log grid in `eta` followed by golden-section
/// refinement between the neighbours of the best grid point.
pub(crate) fn chernoff_k_grid(g: f64, points: usize) -> Result<(f64, f64)> {
    if !(g > 0.0 && g < 1.0) {
        return Err(domain("g", g, "(0, 1)"));
    }
    let top = (1.0 - g).ln();
    let bottom = top + K_SPAN.ln();
    let step = (top - bottom) / (points - 1) as f64;
    let mut best = (f64::INFINITY, 0usize);
    for i in 0..points {
        let r = chernoff_ratio(g, (bottom + step * i as f64).exp());
        if r < best.0 {
            best = (r, i);
        }
    }
    let i = best.1;
    let lo = bottom + step * i.saturating_sub(1) as f64;
    let hi = (bottom + step * (i + 1).min(points - 1) as f64).min(top);
    let (k, eta) = refine_k(g, lo, hi);
    Ok(if k < best.0 {
        (k, eta)
    } else {
        (best.0, (bottom + step * i as f64).exp())
    })
}

/// Chernoff constant `K(g) = inf_{0 < eta <= 1-g} D(g + eta || g) / eta^2`.
pub fn chernoff_k(g: f64) -> Result<f64> {
    chernoff_k_grid(g, K_GRID).map(|(k, _)| k)
}

fn check_crossover(p: f64) -> Result<()> {
    if p > 0.0 && p <= 0.5 {
        Ok(())
    } else {
        Err(domain("p", p, "(0, 1/2]"))
    }
}

/// Gallager's `E0(rho)` for the BSC with crossover `p`, in bits.
pub fn gallager_e0_bsc(rho: f64, p: f64) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(domain("rho", rho, "finite and >= 0"));
    }
    check_crossover(p)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    let s = 1.0 / (1.0 + rho);
    let a = s * p.ln();
    let b = s * (-p).ln_1p();
    let m = a.max(b);
    let lse = m + ((a - m).exp() + (b - m).exp()).ln();
    Ok((rho - (1.0 + rho) * lse / LN_2).max(0.0))
}

/// An error exponent in bits with its optimizing `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    pub bits: f64,
    pub rho: f64,
    /// Set when the rate is at or above capacity; `bits` is then 0.
    pub at_capacity: bool,
}

impl Exponent {
    fn vanishing() -> Self {
        Self {
            bits: 0.0,
            rho: 0.0,
            at_capacity: true,
        }
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate.is_finite() {
        Ok(())
    } else {
        Err(domain("rate", rate, "> 0"))
    }
}

/// Maximizes `E0(rho) - rho * rate` over `rho = map(u)` for `u` in `[0, u_max]`.
fn maximize_exponent(rate: f64, p: f64, u_max: f64, map: impl Fn(f64) -> f64) -> Exponent {
    let objective = |u: f64| {
        let rho = map(u);
        -(gallager_e0_bsc(rho, p).unwrap_or(f64::NAN) - rho * rate)
    };
    let tol = Tolerances::new(1e-14, 1e-13, 300).unwrap();
    let (u, neg) = golden_section_min(objective, 0.0, u_max, &tol);
    Exponent {
        bits: (-neg).max(0.0),
        rho: map(u),
        at_capacity: false,
    }
}

/// Random-coding exponent `E_r(R) = max_{0<=rho<=1} E0(rho) - rho R`.
pub fn error_exponent_random(rate: f64, p: f64) -> Result<Exponent> {
    check_rate(rate)?;
    check_crossover(p)?;
    if rate >= 1.0 - binary_entropy(p)? {
        return Ok(Exponent::vanishing());
    }
    Ok(maximize_exponent(rate, p, 1.0, |u| u))
}

/// Sphere-packing exponent, `sup_{rho >= 0} E0(rho) - rho R` with `rho`
/// capped at [`SPHERE_RHO_CAP`].
pub fn error_exponent_sphere(rate: f64, p: f64) -> Result<Exponent> {
    check_rate(rate)?;
    check_crossover(p)?;
    if rate >= 1.0 - binary_entropy(p)? {
        return Ok(Exponent::vanishing());
    }
    // search in ln(1 + rho) so that small maximizers keep relative precision
    Ok(maximize_exponent(rate, p, SPHERE_RHO_CAP.ln_1p(), f64::exp_m1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_at_half_is_the_small_eta_limit() {
        let (k, eta) = chernoff_k_grid(0.5, K_GRID).unwrap();
        let limit = 1.0 / (2.0 * 0.25 * LN_2);
        assert!((k - limit).abs() < 1e-7, "{k} vs {limit}");
        assert!(eta < 1e-6);
    }

    #[test]
    fn k_bounded_by_feasible_eta() {
        let k = chernoff_k(0.1).unwrap();
        assert!(k > 0.0);
        assert!(k <= kl_bernoulli(1.0, 0.1).unwrap() / 0.81);
    }

    #[test]
    fn coarse_grid_matches_full_search() {
        for i in 1..200 {
            let g = 0.0025 * i as f64;
            let full = chernoff_k(g).unwrap();
            let (coarse, _) = chernoff_k_grid(g, 256).unwrap();
            assert!((coarse / full - 1.0).abs() < 1e-10, "g={g}: {coarse} vs {full}");
        }
    }

    #[test]
    fn e0_values() {
        assert_eq!(gallager_e0_bsc(0.0, 0.1).unwrap(), 0.0);
        let cutoff = 1.0 - 2.0 * (0.1f64.sqrt() + 0.9f64.sqrt()).log2();
        assert!((gallager_e0_bsc(1.0, 0.1).unwrap() - cutoff).abs() < 1e-14);
        assert!((cutoff - 0.3219).abs() < 1e-4);
        assert_eq!(gallager_e0_bsc(1.0, 0.5).unwrap(), 0.0);
        assert!(gallager_e0_bsc(-1.0, 0.1).is_err());
        assert!(gallager_e0_bsc(1.0, 0.7).is_err());
    }

    #[test]
    fn e0_slope_at_origin_is_capacity() {
        let p = 0.07;
        let h = 1e-6;
        let slope = gallager_e0_bsc(h, p).unwrap() / h;
        let cap = 1.0 - binary_entropy(p).unwrap();
        assert!((slope - cap).abs() < 1e-5);
    }

    #[test]
    fn random_exponent_pinned_below_cutoff() {
        let p = 0.02;
        let e0 = gallager_e0_bsc(1.0, p).unwrap();
        let r = 0.2;
        let er = error_exponent_random(r, p).unwrap();
        assert!((er.bits - (e0 - r)).abs() < 1e-12);
        assert!((er.rho - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exponents_vanish_at_capacity() {
        let p = 0.1;
        let cap = 1.0 - binary_entropy(p).unwrap();
        let er = error_exponent_random(cap, p).unwrap();
        assert!(er.at_capacity && er.bits == 0.0);
        let near = error_exponent_random(cap - 1e-6, p).unwrap();
        assert!(near.bits < 1e-9 && !near.at_capacity);
        assert_eq!(error_exponent_sphere(cap + 0.1, p).unwrap().bits, 0.0);
    }

    #[test]
    fn sphere_equals_random_above_critical_rate() {
        // near capacity both maximizers are interior to [0, 1]
        let p = 0.05;
        let cap = 1.0 - binary_entropy(p).unwrap();
        let r = cap - 0.02;
        let er = error_exponent_random(r, p).unwrap();
        let esp = error_exponent_sphere(r, p).unwrap();
        assert!(er.rho < 1.0);
        assert!((er.bits - esp.bits).abs() < 1e-12);
    }
}
