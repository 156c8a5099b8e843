use crate::error::{domain, Result};
use crate::numerics::{binary_entropy_inv, chernoff_k, kl_bernoulli, kl_gaussian_var, log1p_excess_inv};

/// Which printed form of `T(n)` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TConvention {
    /// `-W_L(-e^{-1} (1/4)^{1/n}) - 1`, i.e. `epsilon_tilde(1, n)`.
    #[default]
    Derived,
    /// `-W_L(-e^{-1} (1/4)^{1/n})` without the offset.
    AsPrinted,
}

fn check_n(n: f64) -> Result<()> {
    if n > 0.0 && n.is_finite() {
        Ok(())
    } else {
        Err(domain("n", n, "finite and > 0"))
    }
}

/// `-W_L(-e^{-1} (delta/2)^{2/n}) - 1`: the relative variance excess at
/// which the chi-square Chernoff bound equals `delta/2`.
pub fn epsilon_tilde(delta: f64, n: f64) -> Result<f64> {
    check_n(n)?;
    if !(delta > 0.0 && delta <= 2.0) {
        return Err(domain("delta", delta, "(0, 2]"));
    }
    log1p_excess_inv(-(2.0 / n) * (delta / 2.0).ln())
}

/// `phi(n, y) = n * epsilon_tilde(y, n)`.
pub fn phi_of_n(n: f64, y: f64) -> Result<f64> {
    Ok(n * epsilon_tilde(y, n)?)
}

pub fn t_of_n(n: f64, convention: TConvention) -> Result<f64> {
    let t = epsilon_tilde(1.0, n)?;
    Ok(match convention {
        TConvention::Derived => t,
        TConvention::AsPrinted => t + 1.0,
    })
}

/// Lower limit on the variance ratio for which the numeric Gaussian bound
/// is convex.
pub fn mu_of_n(n: f64) -> Result<f64> {
    mu_with(n, TConvention::Derived)
}

pub(crate) fn mu_with(n: f64, convention: TConvention) -> Result<f64> {
    let t = t_of_n(n, convention)?;
    Ok(0.5 * (1.0 + 1.0 / (t + 1.0) + (4.0 * t + 2.0) / (n * t * (1.0 + t))))
}

/// `h_b^{-1}(1 - C(G)/R)`, the error floor forced on a test channel of
/// capacity below the rate.
pub fn pe_floor_over_channel(rate: f64, test_capacity: f64) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(domain("rate", rate, "> 0"));
    }
    if !(test_capacity >= 0.0 && test_capacity < rate) {
        return Err(domain("test_capacity", test_capacity, "[0, rate)"));
    }
    binary_entropy_inv(1.0 - test_capacity / rate)
}

/// `n log2 p`: every neighborhood configuration, including the all-error
/// one, has probability at least `p^n`.
pub fn trivial_pe_lower(p: f64, n: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(domain("p", p, "(0, 1/2]"));
    }
    if !(n >= 0.0) {
        return Err(domain("n", n, ">= 0"));
    }
    Ok(n * p.log2())
}

/// Change-of-measure mapping for the BSC: a noise set of probability `x` under
/// the test channel `g` has probability at least this under `p`.
pub fn bsc_mapping_f(x: f64, g: f64, p: f64, n: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(domain("x", x, "(0, 1]"));
    }
    if !(p > 0.0 && p < g && g < 0.5) {
        return Err(domain("g", g, "p < g < 1/2"));
    }
    if !(n >= 0.0) {
        return Err(domain("n", n, ">= 0"));
    }
    let eps = ((2.0 / x).log2() / chernoff_k(g)?).sqrt();
    let log_odds = (g * (1.0 - p) / (p * (1.0 - g))).log2();
    let log2_f = (x / 2.0).log2() - n * kl_bernoulli(g, p)? - eps * n.sqrt() * log_odds;
    Ok(log2_f.exp2())
}

fn check_gaussian(delta: f64, var_ratio: f64, n: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(domain("delta", delta, "(0, 1]"));
    }
    if !(var_ratio >= 1.0) {
        return Err(domain("var_ratio", var_ratio, ">= 1"));
    }
    check_n(n)
}

/// Gaussian counterpart of [`bsc_mapping_f`], asymptotic form.
pub fn awgn_mapping_f(delta: f64, var_ratio: f64, n: f64) -> Result<f64> {
    check_gaussian(delta, var_ratio, n)?;
    let d = kl_gaussian_var(var_ratio, 1.0)?;
    let spread = 1.5 + 2.0 * (2.0 / delta).ln();
    Ok(delta / 2.0 * (-n * d - n.sqrt() * spread * (var_ratio - 1.0)).exp())
}

/// Gaussian mapping through the exact chi-square Chernoff bound. Defined
/// for `var_ratio > mu(n)`.
pub fn awgn_mapping_f_l(delta: f64, var_ratio: f64, n: f64) -> Result<f64> {
    check_gaussian(delta, var_ratio, n)?;
    let mu = mu_of_n(n)?;
    if !(var_ratio > mu) {
        return Err(domain("var_ratio", var_ratio, "> mu(n)"));
    }
    let d = kl_gaussian_var(var_ratio, 1.0)?;
    Ok(delta / 2.0 * (-n * d - 0.5 * phi_of_n(n, delta)? * (var_ratio - 1.0)).exp())
}

/// `2^{-K(g) eps^2}`, bounding `P(Bin(n, g) > n g + eps sqrt(n))`.
pub fn chernoff_bsc_tail(g: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(domain("eps", eps, "> 0"));
    }
    Ok((-chernoff_k(g)? * eps * eps).exp2())
}

/// Bounds on `P(chi2_n / n > 1 + eps_norm)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnTail {
    /// `((1 + eps) e^{-eps})^{n/2}`
    pub chernoff: f64,
    /// `e^{-sqrt(n) eps / 4}`
    pub affine: f64,
    /// Whether `eps >= 3 / sqrt(n)`, below which `affine` is not a bound.
    pub affine_valid: bool,
}

pub fn chernoff_awgn_tail(n: f64, eps_norm: f64) -> Result<AwgnTail> {
    if !(n >= 1.0) {
        return Err(domain("n", n, ">= 1"));
    }
    if !(eps_norm > 0.0) {
        return Err(domain("eps_norm", eps_norm, "> 0"));
    }
    let root = n.sqrt();
    Ok(AwgnTail {
        chernoff: (-0.5 * n * crate::numerics::ln_excess(eps_norm)).exp(),
        affine: (-root * eps_norm / 4.0).exp(),
        affine_valid: eps_norm * root >= 3.0 * (1.0 - 4.0 * f64::EPSILON),
    })
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_vanishes_at_two() {
        for n in [1.0, 10.0, 1e6] {
            assert_eq!(phi_of_n(n, 2.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn t_decays() {
        let ts: Vec<f64> = [1.0, 1e2, 1e4, 1e8]
            .iter()
            .map(|&n| t_of_n(n, TConvention::Derived).unwrap())
            .collect();
        assert!(ts.windows(2).all(|w| w[1] < w[0]));
        assert!(ts[3] < 1e-3);
        let printed = t_of_n(1e8, TConvention::AsPrinted).unwrap();
        assert!((printed - 1.0 - ts[3]).abs() < 1e-15);
    }

    #[test]
    fn epsilon_tilde_solves_chernoff_equation() {
        let (delta, n) = (0.01, 50.0);
        let e = epsilon_tilde(delta, n).unwrap();
        let lhs = ((1.0 + e) * (-e).exp()).powf(n / 2.0);
        assert!((lhs / (delta / 2.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mu_tends_to_one() {
        assert!(mu_of_n(1.0).unwrap() > 1.0);
        assert!((mu_of_n(1e12).unwrap() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn floor_values() {
        assert_eq!(pe_floor_over_channel(1.0 / 3.0, 0.0).unwrap(), 0.5);
        let v = pe_floor_over_channel(1.0 / 3.0, 1.0 / 6.0).unwrap();
        assert!((v - 0.110_027_864).abs() < 1e-8);
        assert!(pe_floor_over_channel(1.0 / 3.0, 1.0 / 3.0).is_err());
        assert!(pe_floor_over_channel(0.3, 0.3 - 1e-12).unwrap() < 1e-12);
    }

    #[test]
    fn trivial_values() {
        assert!((trivial_pe_lower(0.1, 10.0).unwrap() + 33.219_280_948).abs() < 1e-8);
        assert_eq!(trivial_pe_lower(0.5, 7.0).unwrap(), -7.0);
    }

    #[test]
    fn mapping_identities() {
        let f0 = bsc_mapping_f(0.3, 0.2, 0.1, 0.0).unwrap();
        assert!((f0 - 0.15).abs() < 1e-15);
        assert!(bsc_mapping_f(0.2, 0.3, 0.1, 50.0).unwrap() > bsc_mapping_f(0.1, 0.3, 0.1, 50.0).unwrap());
        assert!((awgn_mapping_f(0.4, 1.0, 100.0).unwrap() - 0.2).abs() < 1e-15);
        let mu = mu_of_n(1.0).unwrap();
        assert!(awgn_mapping_f_l(0.5, 0.99 * mu, 1.0).is_err());
        assert!(awgn_mapping_f_l(0.5, 1.01 * mu, 1.0).is_ok());
    }

    #[test]
    fn tail_threshold_flag() {
        let n: f64 = 16.0;
        let at = chernoff_awgn_tail(n, 3.0 / n.sqrt()).unwrap();
        assert!(at.affine_valid && at.affine.is_finite());
        assert!(!chernoff_awgn_tail(n, 0.5 / n.sqrt()).unwrap().affine_valid);
        assert!((chernoff_awgn_tail(n, 1e-12).unwrap().chernoff - 1.0).abs() < 1e-15);
        let k = crate::numerics::chernoff_k(0.5).unwrap();
        assert!((chernoff_bsc_tail(0.5, 2.0).unwrap() - (-4.0 * k).exp2()).abs() < 1e-15);
    }
}
