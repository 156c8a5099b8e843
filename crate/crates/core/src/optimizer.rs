//! Joint minimization of transmit power plus decoding power under the
//! neighborhood-size lower bounds, and the limits it implies.

use std::f64::consts::LN_2;

use crate::bounds::{BoundVariant, NeighborhoodBound};
use crate::channels::{
    crossover_from_snr, min_snr_for_rate, shannon_waterfall_snr, ChannelKind, ChannelPoint,
};
use crate::classical::repetition_log2_pe;
use crate::error::{domain, Error, Result};
use crate::numerics::{
    binary_entropy_inv, bisect, golden_section_min, kl_bernoulli, kl_gaussian_var, Tolerances,
};

/// Physical constants behind the normalized decoding cost `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawTechnology {
    /// Path loss between transmitter and receiver.
    pub xi_t: f64,
    /// Decoder overhead factor.
    pub xi_d: f64,
    /// Energy per node per iteration, joules.
    pub e_node: f64,
    /// Receiver noise energy per sample, joules.
    pub sigma_p2: f64,
}

/// Decoder technology: energy per node-iteration in SNR units and the
/// decoding graph's connectivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TechnologyWeights {
    gamma: f64,
    alpha: f64,
    raw: Option<RawTechnology>,
}

impl TechnologyWeights {
    pub fn new(gamma: f64, alpha: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(domain("gamma", gamma, "finite and > 0"));
        }
        if !(alpha >= 2.0) || !alpha.is_finite() {
            return Err(domain("alpha", alpha, "finite and >= 2"));
        }
        Ok(Self {
            gamma,
            alpha,
            raw: None,
        })
    }

    /// `gamma = xi_d e_node / (sigma_p2 xi_t log2 alpha)`.
    pub fn from_raw(raw: RawTechnology, alpha: f64) -> Result<Self> {
        for (name, v) in [
            ("xi_t", raw.xi_t),
            ("xi_d", raw.xi_d),
            ("e_node", raw.e_node),
            ("sigma_p2", raw.sigma_p2),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(domain(name, v, "finite and > 0"));
            }
        }
        if !(alpha >= 2.0) {
            return Err(domain("alpha", alpha, ">= 2"));
        }
        let gamma = raw.xi_d * raw.e_node / (raw.sigma_p2 * raw.xi_t * alpha.log2());
        Ok(Self {
            raw: Some(raw),
            ..Self::new(gamma, alpha)?
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn raw(&self) -> Option<RawTechnology> {
        self.raw
    }
}

/// One point of an optimized power curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaterslidePoint {
    pub target_pe: f64,
    pub snr_transmit: f64,
    pub n: f64,
    /// `log2 n / log2 alpha`.
    pub iterations: f64,
    /// `gamma log2 n`.
    pub decode_power_norm: f64,
    pub total_norm: f64,
}

const PRESCAN: usize = 64;
const SNR_SPAN: f64 = 1e3;

/// Reusable solver for one rate and channel family.
pub struct PowerOptimizer {
    bound: NeighborhoodBound,
    variant: BoundVariant,
    threshold: f64,
}

impl PowerOptimizer {
    pub fn new(rate: f64, kind: ChannelKind, variant: BoundVariant) -> Result<Self> {
        Ok(Self {
            bound: NeighborhoodBound::new(rate, kind)?,
            variant,
            threshold: min_snr_for_rate(rate, kind)?,
        })
    }

    pub fn bound(&self) -> &NeighborhoodBound {
        &self.bound
    }

    fn neighborhood(&self, snr: f64, target_pe: f64) -> f64 {
        ChannelPoint::new(self.bound.kind(), snr)
            .and_then(|ch| self.bound.min_neighborhood(&ch, target_pe, self.variant))
            .unwrap_or(f64::INFINITY)
    }

    /// Minimizes `snr + gamma log2 n(snr)` over
    /// `[threshold (1 + 1e-9), 1e3 threshold]`.
    pub fn total_power_lower(&self, weights: &TechnologyWeights, target_pe: f64) -> Result<WaterslidePoint> {
        if !(target_pe > 0.0 && target_pe < 0.5) {
            return Err(domain("target_pe", target_pe, "(0, 1/2)"));
        }
        let gamma = weights.gamma();
        let total = |ln_snr: f64| {
            let snr = ln_snr.exp();
            snr + gamma * self.neighborhood(snr, target_pe).log2()
        };
        let lo = (self.threshold * (1.0 + 1e-9)).ln();
        let hi = (self.threshold * SNR_SPAN).ln();
        let grid: Vec<f64> = (0..PRESCAN)
            .map(|i| lo + (hi - lo) * i as f64 / (PRESCAN - 1) as f64)
            .collect();
        let mut best = (0usize, f64::INFINITY);
        for (i, &u) in grid.iter().enumerate() {
            let v = total(u);
            if v < best.1 {
                best = (i, v);
            }
        }
        if !best.1.is_finite() {
            return Err(Error::Infeasible(format!(
                "target {target_pe} not reachable below snr {}",
                self.threshold * SNR_SPAN
            )));
        }
        let i = best.0;
        let tol = Tolerances {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_iter: 200,
        };
        let (u, _) = golden_section_min(total, grid[i.saturating_sub(1)], grid[(i + 1).min(PRESCAN - 1)], &tol);
        let snr = u.exp();
        let n = self.neighborhood(snr, target_pe);
        let decode = gamma * n.log2();
        Ok(WaterslidePoint {
            target_pe,
            snr_transmit: snr,
            n,
            iterations: n.log2() / weights.alpha().log2(),
            decode_power_norm: decode,
            total_norm: snr + decode,
        })
    }

    /// One optimized point per target; infeasible targets are reported
    /// individually.
    pub fn waterslide_curve(&self, weights: &TechnologyWeights, pe_grid: &[f64]) -> Result<Vec<Result<WaterslidePoint>>> {
        if pe_grid.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Degenerate("pe grid must be strictly decreasing".into()));
        }
        Ok(pe_grid.iter().map(|&pe| self.total_power_lower(weights, pe)).collect())
    }
}

pub fn total_power_lower(
    rate: f64,
    weights: &TechnologyWeights,
    target_pe: f64,
    kind: ChannelKind,
    variant: BoundVariant,
) -> Result<WaterslidePoint> {
    PowerOptimizer::new(rate, kind, variant)?.total_power_lower(weights, target_pe)
}

pub fn waterslide_curve(
    rate: f64,
    weights: &TechnologyWeights,
    pe_grid: &[f64],
    kind: ChannelKind,
    variant: BoundVariant,
) -> Result<Vec<Result<WaterslidePoint>>> {
    PowerOptimizer::new(rate, kind, variant)?.waterslide_curve(weights, pe_grid)
}

/// Divergence between the capacity-achieving test channel and the actual
/// channel: bits for the BSC, nats for the AWGN channel.
pub fn divergence_at_capacity(rate: f64, snr: f64, kind: ChannelKind) -> Result<f64> {
    if !(snr > 0.0) {
        return Err(domain("snr", snr, "> 0"));
    }
    match kind {
        ChannelKind::BscFromBpskHard => {
            if !(rate > 0.0 && rate < 1.0) {
                return Err(domain("rate", rate, "(0, 1)"));
            }
            kl_bernoulli(binary_entropy_inv(1.0 - rate)?, crossover_from_snr(snr))
        }
        ChannelKind::Awgn => {
            if !(rate > 0.0) {
                return Err(domain("rate", rate, "> 0"));
            }
            kl_gaussian_var(snr / min_snr_for_rate(rate, kind)?, 1.0)
        }
    }
}

/// `f / f'` for `f = divergence_at_capacity`, by central difference.
fn divergence_log_ratio(rate: f64, snr: f64, kind: ChannelKind) -> f64 {
    let h = snr * 1e-6;
    let f = |s: f64| divergence_at_capacity(rate, s, kind).unwrap_or(f64::NAN);
    f(snr) / ((f(snr + h) - f(snr - h)) / (2.0 * h))
}

/// Large-certainty optimal transmit SNR: the root of `f / f' = gamma`
/// above the capacity threshold, `f` being [`divergence_at_capacity`].
pub fn asymptotic_transmit_snr(rate: f64, gamma: f64, kind: ChannelKind) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(domain("gamma", gamma, "finite and > 0"));
    }
    let threshold = min_snr_for_rate(rate, kind)?;
    if !(threshold > 0.0) {
        return Err(domain("rate", rate, "> 0"));
    }
    // near threshold f is quadratic in the excess, so f/f' is about half of it
    let lo = threshold + 1e-3 * gamma.min(threshold);
    let excess = |s: f64| divergence_log_ratio(rate, s, kind) - gamma;
    if !(excess(lo) < 0.0) {
        return Err(Error::Bracket(format!(
            "f/f' - gamma = {} at snr {lo}, expected negative",
            excess(lo)
        )));
    }
    let mut hi = threshold + 2.0 * gamma.max(1e-3 * threshold);
    while !(excess(hi) > 0.0) {
        hi = threshold + 2.0 * (hi - threshold);
        if hi > threshold * 1e8 {
            return Err(Error::Bracket(format!(
                "f/f' stays below gamma = {gamma} up to snr {hi}"
            )));
        }
    }
    let tol = Tolerances {
        abs_tol: 1e-15 * threshold,
        rel_tol: 1e-15,
        max_iter: 300,
    };
    bisect(excess, lo, hi, &tol)
}

/// Which waterfall an uncoded link competes against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WaterfallBaseline {
    /// Capacity reduced by `1 - h_b(pe)`.
    #[default]
    RateDistortion,
    /// The plain capacity threshold.
    Capacity,
}

/// Error probability below which an ideal code that spends a single
/// decoding iteration (power `gamma log2 alpha`) can still beat
/// repetition coding at the same total power.
///
/// Solves `pe = repetition_pe(waterfall_snr(pe) + gamma log2 alpha)`.
pub fn uncoded_coding_threshold(
    rate: f64,
    gamma: f64,
    alpha: f64,
    kind: ChannelKind,
    baseline: WaterfallBaseline,
) -> Result<f64> {
    let weights = TechnologyWeights::new(gamma, alpha)?;
    let reps = 1.0 / rate;
    if !(rate > 0.0 && rate <= 1.0) || (reps - reps.round()).abs() > 1e-9 * reps || (reps.round() as u32).is_multiple_of(2) {
        return Err(domain("rate", rate, "1/rate an odd integer"));
    }
    let reps = reps.round() as u32;
    let extra = weights.gamma() * weights.alpha().log2();
    let waterfall = |pe: f64| match baseline {
        WaterfallBaseline::RateDistortion => shannon_waterfall_snr(rate, pe, kind),
        WaterfallBaseline::Capacity => min_snr_for_rate(rate, kind),
    };
    // in ln pe: g(u) = ln repetition_pe(...) - u
    let map = |u: f64| -> f64 {
        waterfall(u.exp())
            .and_then(|s| repetition_log2_pe(s + extra, reps))
            .map_or(f64::NAN, |l| l * LN_2)
    };
    let top = 0.5f64.ln();
    let bottom = -700.0;
    let g = |u: f64| map(u) - u;
    if !(g(top) < 0.0 && g(bottom) > 0.0) {
        return Err(Error::Infeasible(format!(
            "no crossing in (e^{bottom}, 1/2): g = ({}, {})",
            g(bottom),
            g(top)
        )));
    }
    // damped fixed point first; fall back to bisection if it stalls or escapes
    let mut u = 0.5 * (top + bottom);
    for _ in 0..200 {
        let next = 0.5 * u + 0.5 * map(u);
        if !(next > bottom && next < top) {
            break;
        }
        if (next - u).abs() <= 1e-14 * u.abs() {
            return Ok(next.exp());
        }
        u = next;
    }
    let tol = Tolerances {
        abs_tol: 1e-14,
        rel_tol: 1e-14,
        max_iter: 300,
    };
    Ok(bisect(g, bottom, top, &tol)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_weights_reproduce_example_gamma() {
        // 1 pJ per node, 86 dB path loss, 4e-21 J noise, alpha = 4
        let raw = RawTechnology {
            xi_t: 10f64.powf(8.6),
            xi_d: 1.0,
            e_node: 1e-12,
            sigma_p2: 4e-21,
        };
        let w = TechnologyWeights::from_raw(raw, 4.0).unwrap();
        let direct = raw.xi_d * raw.e_node / (raw.sigma_p2 * raw.xi_t * 2.0);
        assert!((w.gamma() / direct - 1.0).abs() < 1e-12);
        assert!((w.gamma() - 0.3).abs() < 0.02);
    }

    #[test]
    fn weights_validate() {
        assert!(TechnologyWeights::new(0.0, 4.0).is_err());
        assert!(TechnologyWeights::new(0.3, 1.5).is_err());
    }

    #[test]
    fn divergence_zero_at_threshold() {
        for kind in [ChannelKind::BscFromBpskHard, ChannelKind::Awgn] {
            let t = min_snr_for_rate(1.0 / 3.0, kind).unwrap();
            assert!(divergence_at_capacity(1.0 / 3.0, t, kind).unwrap() < 1e-20);
            assert!(divergence_at_capacity(1.0 / 3.0, 2.0 * t, kind).unwrap() > 0.0);
        }
    }

    #[test]
    fn root_residual() {
        for kind in [ChannelKind::BscFromBpskHard, ChannelKind::Awgn] {
            for gamma in [1e-3, 0.3, 10.0] {
                let z = asymptotic_transmit_snr(1.0 / 3.0, gamma, kind).unwrap();
                let r = divergence_log_ratio(1.0 / 3.0, z, kind);
                assert!((r - gamma).abs() <= 1e-6 * gamma, "{kind:?} {gamma}: {r}");
            }
        }
    }

    #[test]
    fn threshold_needs_odd_reciprocal() {
        let k = ChannelKind::BscFromBpskHard;
        assert!(uncoded_coding_threshold(0.5, 1.0, 3.0, k, WaterfallBaseline::default()).is_err());
    }
}
