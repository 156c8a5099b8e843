//! Behaviour of the neighborhood-size bounds as the rate approaches
//! capacity: gap decomposition, the quadratic-in-`sqrt(n)` bound, its
//! small-gap coefficient expansions, and brute-force `n` versus gap curves.

use std::f64::consts::LN_2;

use crate::bounds::{quadratic_sqrt_n, BoundVariant, NeighborhoodBound};
use crate::channels::{awgn_capacity, bsc_capacity, ChannelKind, ChannelPoint};
use crate::error::{domain, Error, Result};
use crate::numerics::{binary_entropy, binary_entropy_inv, chernoff_k, kl_bernoulli, kl_gaussian_var};

/// Split of the total gap `C/(1 - h_b(pe)) - R` into the part that the
/// allowed bit errors buy and the part left to the code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSplit {
    pub rate_distortion: f64,
    pub coding: f64,
}

pub fn gap_decomposition(capacity: f64, rate: f64, pe: f64) -> Result<GapSplit> {
    if !(0.0..0.5).contains(&pe) {
        return Err(domain("pe", pe, "[0, 1/2)"));
    }
    let stretched = capacity / (1.0 - binary_entropy(pe)?);
    if !(rate <= stretched) {
        return Err(domain("rate", rate, "<= C / (1 - h_b(pe))"));
    }
    Ok(GapSplit {
        rate_distortion: stretched - capacity,
        coding: capacity - rate,
    })
}

/// Error probability at which both parts of the gap are equal.
pub fn balanced_pe(capacity: f64, gap: f64) -> Result<f64> {
    if !(capacity > 0.0 && gap > 0.0) {
        return Err(domain("gap", gap, "> 0 with positive capacity"));
    }
    binary_entropy_inv(gap / (capacity + gap))
}

/// How the target error probability scales with the gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PeTarget {
    /// `pe = gap^beta`
    Power(f64),
    /// `pe` chosen so that both gaps are equal.
    Balanced,
}

impl PeTarget {
    pub fn pe(&self, capacity: f64, gap: f64) -> Result<f64> {
        match *self {
            PeTarget::Power(beta) => Ok(gap.powf(beta)),
            PeTarget::Balanced => balanced_pe(capacity, gap),
        }
    }

    fn beta(&self) -> f64 {
        match *self {
            PeTarget::Power(beta) => beta,
            PeTarget::Balanced => 1.0,
        }
    }
}

/// Parameters of the small-gap analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSpec {
    pub gap: f64,
    pub target: PeTarget,
    /// The test channel sits `gap^r` away from the true one.
    pub r: f64,
    /// Parameter of the entropy bounds used to show `c < 0`.
    pub d: f64,
}

impl GapSpec {
    /// Defaults `d = 10`, `r = 0.9 min(beta (d-1)/d, 1)`.
    pub fn new(gap: f64, target: PeTarget) -> Result<Self> {
        let d = 10.0;
        let r = 0.9 * (target.beta() * (d - 1.0) / d).min(1.0);
        Self::with_params(gap, target, r, d)
    }

    pub fn with_params(gap: f64, target: PeTarget, r: f64, d: f64) -> Result<Self> {
        if !(gap > 0.0) {
            return Err(domain("gap", gap, "> 0"));
        }
        if let PeTarget::Power(beta) = target {
            if !(beta > 0.0) {
                return Err(domain("beta", beta, "> 0"));
            }
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(domain("r", r, "(0, 1)"));
        }
        if !(d > 1.0) {
            return Err(domain("d", d, "> 1"));
        }
        Ok(Self { gap, target, r, d })
    }
}

/// `a n + b sqrt(n) + c >= 0` must hold for the bound to reach the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub kind: ChannelKind,
}

/// Lower bound on `n` from the larger root in `sqrt(n)`.
pub fn quadratic_sqrt_n_lower(coeffs: &QuadraticCoeffs) -> f64 {
    quadratic_sqrt_n(coeffs.a, coeffs.b, coeffs.c)
}

/// Exact coefficients at the test channel `gap^r` away, plus their
/// leading-order small-gap expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapCoeffs {
    pub exact: QuadraticCoeffs,
    pub taylor: QuadraticCoeffs,
    /// Crossover or variance ratio of the test channel.
    pub test_param: f64,
    pub delta: f64,
}

fn pe_and_rate(spec: &GapSpec, capacity: f64) -> Result<(f64, f64)> {
    if !(spec.gap < capacity) {
        return Err(domain("gap", spec.gap, "< capacity"));
    }
    Ok((spec.target.pe(capacity, spec.gap)?, capacity - spec.gap))
}

/// BSC with crossover `p`, coefficients in bits.
pub fn bsc_gap_coeffs(spec: &GapSpec, p: f64) -> Result<GapCoeffs> {
    if !(p > 0.0 && p < 0.5) {
        return Err(domain("p", p, "(0, 1/2)"));
    }
    let capacity = bsc_capacity(p);
    let (pe, rate) = pe_and_rate(spec, capacity)?;
    let shift = spec.gap.powf(spec.r);
    let g = p + shift;
    if !(g < 0.5) {
        return Err(Error::Infeasible(format!("test crossover {g} not below 1/2")));
    }
    let delta = 1.0 - bsc_capacity(g) / rate;
    if !(delta > 0.0) {
        return Err(Error::Infeasible(format!(
            "test channel capacity {} not below rate {rate}",
            bsc_capacity(g)
        )));
    }
    let log_odds = (g * (1.0 - p) / (p * (1.0 - g))).log2();
    let y = binary_entropy_inv(delta)?;
    let eps = ((2.0 / y).log2() / chernoff_k(g)?).sqrt();
    let c_of = |y: f64| pe.log2() - y.log2() + 1.0;
    let exact = QuadraticCoeffs {
        a: kl_bernoulli(g, p)?,
        b: eps * log_odds,
        c: c_of(y),
        kind: ChannelKind::BscFromBpskHard,
    };
    let curvature = p * (1.0 - p) * LN_2;
    let slope = ((1.0 - p) / p).log2();
    let delta_t = slope * shift / capacity;
    let y_t = binary_entropy_inv(delta_t.min(1.0))?;
    let eps_t = ((2.0 / y_t).log2() / chernoff_k(p)?).sqrt();
    let taylor = QuadraticCoeffs {
        a: shift * shift / (2.0 * curvature),
        b: eps_t * shift / curvature,
        c: c_of(y_t),
        kind: ChannelKind::BscFromBpskHard,
    };
    Ok(GapCoeffs {
        exact,
        taylor,
        test_param: g,
        delta,
    })
}

/// AWGN channel at `snr`, coefficients in nats.
pub fn awgn_gap_coeffs(spec: &GapSpec, snr: f64) -> Result<GapCoeffs> {
    if !(snr > 0.0) {
        return Err(domain("snr", snr, "> 0"));
    }
    let capacity = awgn_capacity(snr);
    let (pe, rate) = pe_and_rate(spec, capacity)?;
    let shift = spec.gap.powf(spec.r);
    let excess = shift * 2.0 * (snr + 1.0) / snr;
    let var_ratio = 1.0 + excess;
    let delta = 1.0 - awgn_capacity(snr / var_ratio) / rate;
    if !(delta > 0.0) {
        return Err(Error::Infeasible(format!(
            "test channel capacity {} not below rate {rate}",
            awgn_capacity(snr / var_ratio)
        )));
    }
    let spread = |y: f64| 1.5 + 2.0 * (2.0 / y).ln();
    let c_of = |y: f64| pe.ln() - (y / 2.0).ln();
    let y = binary_entropy_inv(delta)?;
    let exact = QuadraticCoeffs {
        a: kl_gaussian_var(var_ratio, 1.0)?,
        b: spread(y) * excess,
        c: c_of(y),
        kind: ChannelKind::Awgn,
    };
    let y_t = binary_entropy_inv((shift / capacity).min(1.0))?;
    let taylor = QuadraticCoeffs {
        a: shift * shift * ((snr + 1.0) / snr).powi(2),
        b: spread(y_t) * excess,
        c: c_of(y_t),
        kind: ChannelKind::Awgn,
    };
    Ok(GapCoeffs {
        exact,
        taylor,
        test_param: var_ratio,
        delta,
    })
}

/// One point of an `n` versus gap curve; `n` is infinite or NaN when the
/// bound could not be inverted at this gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPoint {
    pub gap: f64,
    pub target_pe: f64,
    pub n: f64,
}

/// Minimum neighborhood size from the full bound (supremum over all test
/// channels) at rate `C - gap`, for each gap.
///
/// `n` is the real root of the inversion and may be below 1; where only
/// the numeric Gaussian form applies it is at least 1.
pub fn n_vs_gap_curve(
    target: PeTarget,
    channel: &ChannelPoint,
    gaps: &[f64],
    variant: BoundVariant,
) -> Vec<GapPoint> {
    let capacity = channel.capacity();
    gaps.iter()
        .map(|&gap| {
            let target_pe = target.pe(capacity, gap).unwrap_or(f64::NAN);
            let n = if gap > 0.0 && gap < capacity && target_pe > 0.0 && target_pe < 0.5 {
                NeighborhoodBound::new(capacity - gap, channel.kind())
                    .and_then(|b| b.min_neighborhood_raw(channel, target_pe, variant))
                    .unwrap_or(f64::NAN)
            } else {
                f64::NAN
            };
            GapPoint { gap, target_pe, n }
        })
        .collect()
}

/// Least-squares slope of `log2 n` against `log2 gap`.
pub fn fitted_slope(curve: &[GapPoint]) -> Result<f64> {
    if curve.len() < 4 {
        return Err(Error::Degenerate(format!("{} points, need at least 4", curve.len())));
    }
    if curve.iter().any(|p| !(p.n > 0.0 && p.n.is_finite() && p.gap > 0.0)) {
        return Err(Error::Degenerate("non-positive or non-finite point".into()));
    }
    let xs: Vec<f64> = curve.iter().map(|p| p.gap.log2()).collect();
    let ys: Vec<f64> = curve.iter().map(|p| p.n.log2()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all gaps equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(f: impl Fn(f64) -> f64) -> Vec<GapPoint> {
        (0..9)
            .map(|i| {
                let gap = 10f64.powf(-3.0 + 0.25 * i as f64);
                GapPoint { gap, target_pe: gap, n: f(gap) }
            })
            .collect()
    }

    #[test]
    fn slope_of_power_laws() {
        assert!((fitted_slope(&curve(|g| g.powi(-2))).unwrap() + 2.0).abs() < 1e-12);
        assert!(fitted_slope(&curve(|_| 5.0)).unwrap().abs() < 1e-12);
        let s = fitted_slope(&curve(|g| g.powi(-2) * (1.0 / g).log2())).unwrap();
        assert!(s < -2.0 && s > -2.5);
        assert!(fitted_slope(&curve(|g| g)[..3]).is_err());
    }

    #[test]
    fn decomposition_identities() {
        let s = gap_decomposition(0.531, 0.5, 0.0).unwrap();
        assert_eq!(s.rate_distortion, 0.0);
        assert!((s.coding - 0.031).abs() < 1e-15);
        let pe = 0.01;
        let h = binary_entropy(pe).unwrap();
        let s = gap_decomposition(0.531, 0.531, pe).unwrap();
        assert!((s.rate_distortion - 0.531 * h / (1.0 - h)).abs() < 1e-15);
        assert_eq!(s.coding, 0.0);
    }

    #[test]
    fn balanced_pe_equalizes() {
        let (c, gap) = (0.531, 0.01);
        let pe = balanced_pe(c, gap).unwrap();
        let s = gap_decomposition(c, c - gap, pe).unwrap();
        assert!((s.rate_distortion - s.coding).abs() < 1e-12);
    }

    #[test]
    fn quadratic_examples() {
        let q = |a, b, c| quadratic_sqrt_n_lower(&QuadraticCoeffs { a, b, c, kind: ChannelKind::Awgn });
        assert!((q(1.0, 0.0, -4.0) - 4.0).abs() < 1e-15);
        assert!((q(1.0, 2.0, -3.0) - 1.0).abs() < 1e-15);
        assert_eq!(q(1.0, 1.0, 1.0), 0.0);
    }

    #[test]
    fn default_spec() {
        let s = GapSpec::new(1e-3, PeTarget::Power(1.0)).unwrap();
        assert!((s.r - 0.81).abs() < 1e-15);
        assert_eq!(s.d, 10.0);
        assert!(GapSpec::with_params(1e-3, PeTarget::Power(1.0), 1.0, 10.0).is_err());
    }

    #[test]
    fn awgn_excess_is_definitional() {
        let spec = GapSpec::new(1e-4, PeTarget::Power(1.0)).unwrap();
        let c = awgn_gap_coeffs(&spec, 1.0).unwrap();
        assert!((c.test_param - 1.0 - 1e-4f64.powf(spec.r) * 4.0).abs() < 1e-15);
    }
}
