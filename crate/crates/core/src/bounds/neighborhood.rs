use std::f64::consts::LN_2;

use super::family::{AwgnFamily, BscFamily, GaussForm, Sup};
use super::mappings::mu_with;
use super::{BoundResult, TConvention};
use crate::channels::{ChannelKind, ChannelPoint};
use crate::error::{domain, Error, Result};
use crate::numerics::{
    binary_entropy_inv, bisect, chernoff_k, error_exponent_random, golden_section_min,
    kl_bernoulli, Tolerances,
};

/// Largest neighborhood size searched by the numeric inversion.
pub const N_MAX: f64 = 1e15;

/// Selects which lower bound is inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundVariant {
    /// BSC: the sphere-packing style bound alone. AWGN: its closed form
    /// with the `sqrt(n)` penalty.
    Asymptotic,
    /// BSC: same as `Asymptotic`. AWGN: the form built on the exact
    /// chi-square Chernoff bound, tighter for moderate `n`.
    Numeric,
    /// The pointwise maximum of every valid bound for the channel (for
    /// the BSC this adds the trivial bound `n log2 p`).
    #[default]
    Combined,
}

/// Larger root in `sqrt(n)` of `a n + b sqrt(n) + c = 0`, squared, or 0 if
/// the quadratic is nonnegative for all `n >= 0`.
pub fn quadratic_sqrt_n(a: f64, b: f64, c: f64) -> f64 {
    if c >= 0.0 && b >= 0.0 {
        return 0.0;
    }
    if a == 0.0 {
        return if b > 0.0 { (-c / b).powi(2) } else { f64::INFINITY };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return 0.0;
    }
    let root = if b >= 0.0 {
        // c < 0 here; this form avoids cancellation when 4ac << b^2
        -2.0 * c / (b + disc.sqrt())
    } else {
        (-b + disc.sqrt()) / (2.0 * a)
    };
    root.max(0.0).powi(2)
}

enum Family {
    Bsc(BscFamily),
    Awgn(AwgnFamily),
}

/// Lower bounds for one rate and channel family. Construction precomputes
/// the test-channel grid, so reuse an instance across SNRs and targets.
pub struct NeighborhoodBound {
    rate: f64,
    kind: ChannelKind,
    family: Family,
    t_convention: TConvention,
}

impl NeighborhoodBound {
    pub fn new(rate: f64, kind: ChannelKind) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::Infeasible(format!("rate {rate} leaves no test channel")));
        }
        let family = match kind {
            ChannelKind::BscFromBpskHard => {
                if rate >= 1.0 {
                    return Err(domain("rate", rate, "< 1 for the BSC"));
                }
                Family::Bsc(BscFamily::new(rate)?)
            }
            ChannelKind::Awgn => Family::Awgn(AwgnFamily::new(rate)?),
        };
        Ok(Self {
            rate,
            kind,
            family,
            t_convention: TConvention::Derived,
        })
    }

    /// Uses the printed form of `T(n)` inside `mu(n)`.
    pub fn with_t_convention(mut self, convention: TConvention) -> Self {
        self.t_convention = convention;
        self
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    fn bsc(&self) -> Result<&BscFamily> {
        match &self.family {
            Family::Bsc(f) => Ok(f),
            Family::Awgn(_) => Err(Error::Degenerate("model built for the AWGN channel".into())),
        }
    }

    fn awgn(&self) -> Result<&AwgnFamily> {
        match &self.family {
            Family::Awgn(f) => Ok(f),
            Family::Bsc(_) => Err(Error::Degenerate("model built for the BSC".into())),
        }
    }

    fn mu(&self, n: f64) -> f64 {
        mu_with(n, self.t_convention).unwrap_or(f64::INFINITY)
    }

    /// Sphere-packing style lower bound for the BSC with crossover `p`.
    pub fn bsc_pe_lower(&self, p: f64, n: f64) -> Result<BoundResult> {
        check_crossover(p)?;
        check_size(n)?;
        let sup = self.bsc()?.sup_log2(p, n);
        Ok(to_result(n, sup, 1.0))
    }

    pub fn awgn_pe_lower_asymptotic(&self, snr: f64, n: f64) -> Result<BoundResult> {
        check_snr(snr)?;
        check_size(n)?;
        let sup = self.awgn()?.sup_ln(snr, n, GaussForm::Asymptotic, 1.0);
        sup.map(|s| to_result(n, s, 1.0 / LN_2))
            .ok_or_else(|| Error::Infeasible("no admissible test channel".into()))
    }

    pub fn awgn_pe_lower_numeric(&self, snr: f64, n: f64) -> Result<BoundResult> {
        check_snr(snr)?;
        check_size(n)?;
        let sup = self.awgn()?.sup_ln(snr, n, GaussForm::Numeric, self.mu(n));
        sup.map(|s| to_result(n, s, 1.0 / LN_2)).ok_or_else(|| {
            Error::Infeasible(format!("no variance ratio above mu({n}) with capacity below the rate"))
        })
    }

    /// log2 of the selected lower bound; `-inf` when the bound is vacuous.
    pub fn log2_pe_lower(&self, channel: &ChannelPoint, n: f64, variant: BoundVariant) -> Result<f64> {
        self.check_kind(channel)?;
        check_size(n)?;
        let snr = channel.snr();
        Ok(match self.kind {
            ChannelKind::BscFromBpskHard => {
                let p = channel.crossover();
                let thm = self.bsc()?.sup_log2(p, n).score;
                if variant == BoundVariant::Combined {
                    thm.max(n * p.log2())
                } else {
                    thm
                }
            }
            ChannelKind::Awgn => {
                let f = self.awgn()?;
                let asym = || f.sup_ln(snr, n, GaussForm::Asymptotic, 1.0);
                let num = || f.sup_ln(snr, n, GaussForm::Numeric, self.mu(n));
                let score = |s: Option<Sup>| s.map_or(f64::NEG_INFINITY, |s| s.score);
                let ln = match variant {
                    BoundVariant::Asymptotic => score(asym()),
                    BoundVariant::Numeric => score(num()),
                    BoundVariant::Combined => score(asym()).max(score(num())),
                };
                ln / LN_2
            }
        })
    }

    fn check_kind(&self, channel: &ChannelPoint) -> Result<()> {
        if channel.kind() == self.kind {
            Ok(())
        } else {
            Err(Error::Degenerate(format!(
                "bound built for {:?}, channel is {:?}",
                self.kind,
                channel.kind()
            )))
        }
    }

    /// Smallest `n >= 1` whose lower bound is at or below `target_pe`;
    /// `inf` if no `n` qualifies.
    pub fn min_neighborhood(&self, channel: &ChannelPoint, target_pe: f64, variant: BoundVariant) -> Result<f64> {
        Ok(self.min_neighborhood_raw(channel, target_pe, variant)?.max(1.0))
    }

    /// As [`Self::min_neighborhood`] but without clamping to `n >= 1`
    /// where the bound has a closed-form inverse. Used for scaling fits.
    pub fn min_neighborhood_raw(&self, channel: &ChannelPoint, target_pe: f64, variant: BoundVariant) -> Result<f64> {
        self.check_kind(channel)?;
        if !(target_pe > 0.0 && target_pe < 0.5) {
            return Err(domain("target_pe", target_pe, "(0, 1/2)"));
        }
        let snr = channel.snr();
        match self.kind {
            ChannelKind::BscFromBpskHard => {
                let p = channel.crossover();
                let log2_t = target_pe.log2();
                let thm = self.bsc()?.min_n(p, log2_t);
                Ok(if variant == BoundVariant::Combined {
                    thm.max(log2_t / p.log2())
                } else {
                    thm
                })
            }
            ChannelKind::Awgn => {
                let ln_t = target_pe.ln();
                let f = self.awgn()?;
                match variant {
                    BoundVariant::Asymptotic => Ok(f.min_n_asymptotic(snr, ln_t)),
                    BoundVariant::Numeric => self.min_n_numeric(snr, ln_t),
                    BoundVariant::Combined => {
                        let asym = f.min_n_asymptotic(snr, ln_t);
                        if asym == f64::INFINITY {
                            return Ok(asym);
                        }
                        let num = self.min_n_numeric(snr, ln_t)?;
                        Ok(if num > 1.0 { asym.max(num) } else { asym })
                    }
                }
            }
        }
    }

    fn min_n_numeric(&self, snr: f64, ln_target: f64) -> Result<f64> {
        let f = self.awgn()?;
        let excess = |ln_n: f64| {
            let n = ln_n.exp();
            f.sup_ln(snr, n, GaussForm::Numeric, self.mu(n))
                .map_or(f64::NEG_INFINITY, |s| s.score)
                - ln_target
        };
        if excess(0.0) <= 0.0 {
            return Ok(1.0);
        }
        let top = N_MAX.ln();
        if excess(top) > 0.0 {
            return Ok(f64::INFINITY);
        }
        let tol = Tolerances {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_iter: 200,
        };
        // the excess is nonincreasing; -inf (no admissible channel) counts as met
        let ln_n = bisect(|u| excess(u).max(-1e300), 0.0, top, &tol)?;
        Ok(ln_n.exp())
    }
}

fn to_result(n: f64, sup: Sup, scale: f64) -> BoundResult {
    BoundResult {
        n,
        log2_pe_bound: sup.score * scale,
        opt_test_channel: sup.channel,
        delta: sup.delta,
    }
}

fn check_crossover(p: f64) -> Result<()> {
    if p > 0.0 && p <= 0.5 {
        Ok(())
    } else {
        Err(domain("p", p, "(0, 1/2]"))
    }
}

fn check_snr(snr: f64) -> Result<()> {
    if snr > 0.0 && snr.is_finite() {
        Ok(())
    } else {
        Err(domain("snr", snr, "finite and > 0"))
    }
}

fn check_size(n: f64) -> Result<()> {
    if n >= 0.0 && n.is_finite() {
        Ok(())
    } else {
        Err(domain("n", n, "finite and >= 0"))
    }
}

/// The BSC bound at one test channel `g`, in bits; `-inf` if the test
/// channel's capacity is not below the rate.
pub fn bsc_pe_lower_at(g: f64, rate: f64, p: f64, n: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(domain("p", p, "(0, 1/2)"));
    }
    if !(g > p && g <= 0.5) {
        return Err(domain("g", g, "(p, 1/2]"));
    }
    if !(rate > 0.0 && rate < 1.0) {
        return Err(domain("rate", rate, "(0, 1)"));
    }
    check_size(n)?;
    let delta = 1.0 - (1.0 - crate::numerics::binary_entropy(g)?) / rate;
    if !(delta > 0.0) {
        return Ok(f64::NEG_INFINITY);
    }
    let y = binary_entropy_inv(delta)?;
    let eps = ((2.0 / y).log2() / chernoff_k(g)?).sqrt();
    let log_odds = (g * (1.0 - p) / (p * (1.0 - g))).log2();
    Ok((y / 2.0).log2() - n * kl_bernoulli(g, p)? - eps * n.sqrt() * log_odds)
}

pub fn bsc_pe_lower(rate: f64, p: f64, n: f64) -> Result<BoundResult> {
    NeighborhoodBound::new(rate, ChannelKind::BscFromBpskHard)?.bsc_pe_lower(p, n)
}

pub fn awgn_pe_lower_asymptotic(rate: f64, snr: f64, n: f64) -> Result<BoundResult> {
    NeighborhoodBound::new(rate, ChannelKind::Awgn)?.awgn_pe_lower_asymptotic(snr, n)
}

pub fn awgn_pe_lower_numeric(rate: f64, snr: f64, n: f64) -> Result<BoundResult> {
    NeighborhoodBound::new(rate, ChannelKind::Awgn)?.awgn_pe_lower_numeric(snr, n)
}

pub fn min_neighborhood(rate: f64, channel: &ChannelPoint, target_pe: f64, variant: BoundVariant) -> Result<f64> {
    NeighborhoodBound::new(rate, channel.kind())?.min_neighborhood(channel, target_pe, variant)
}

/// Gaussian-ensemble random-coding exponent in bits.
fn awgn_random_exponent(rate: f64, snr: f64) -> f64 {
    let e0 = |rho: f64| 0.5 * rho * (snr / (1.0 + rho)).ln_1p() / LN_2;
    let tol = Tolerances::new(1e-14, 1e-13, 300).unwrap();
    let (_, neg) = golden_section_min(|rho| -(e0(rho) - rho * rate), 0.0, 1.0, &tol);
    (-neg).max(0.0)
}

/// Neighborhood size sufficient for a random code decoded within its
/// neighborhood: `log2(1/Pe) / E_r(R)`.
pub fn upper_bound_neighborhood(rate: f64, channel: &ChannelPoint, target_pe: f64) -> Result<f64> {
    if !(target_pe > 0.0 && target_pe <= 1.0) {
        return Err(domain("target_pe", target_pe, "(0, 1]"));
    }
    if !(rate > 0.0) {
        return Err(domain("rate", rate, "> 0"));
    }
    if rate >= channel.capacity() {
        return Err(Error::Infeasible(format!(
            "rate {rate} is not below capacity {}",
            channel.capacity()
        )));
    }
    let exponent = match channel.kind() {
        ChannelKind::BscFromBpskHard => error_exponent_random(rate, channel.crossover())?.bits,
        ChannelKind::Awgn => awgn_random_exponent(rate, channel.snr()),
    };
    Ok(-target_pe.log2() / exponent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_cases() {
        assert!((quadratic_sqrt_n(1.0, 0.0, -4.0) - 4.0).abs() < 1e-15);
        assert!((quadratic_sqrt_n(1.0, 2.0, -3.0) - 1.0).abs() < 1e-15);
        assert_eq!(quadratic_sqrt_n(1.0, 1.0, 2.0), 0.0);
        assert_eq!(quadratic_sqrt_n(1.0, -1.0, 1.0), 0.0);
        assert_eq!(quadratic_sqrt_n(0.0, 0.0, -1.0), f64::INFINITY);
        assert!((quadratic_sqrt_n(0.0, 2.0, -4.0) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn quadratic_small_a_is_stable() {
        let (a, b, c) = (1e-20, 1.0, -1.0);
        let n = quadratic_sqrt_n(a, b, c);
        assert!((n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_arithmetic() {
        let ch = ChannelPoint::bsc_with_crossover(0.05).unwrap();
        let e = error_exponent_random(1.0 / 3.0, ch.crossover()).unwrap().bits;
        let n = upper_bound_neighborhood(1.0 / 3.0, &ch, 2f64.powi(-20)).unwrap();
        assert!((n * e - 20.0).abs() < 1e-9);
        assert_eq!(upper_bound_neighborhood(1.0 / 3.0, &ch, 1.0).unwrap(), 0.0);
        assert!(upper_bound_neighborhood(0.9, &ch, 1e-3).is_err());
    }

    #[test]
    fn kind_mismatch_rejected() {
        let m = NeighborhoodBound::new(0.5, ChannelKind::Awgn).unwrap();
        let ch = ChannelPoint::bsc(4.0).unwrap();
        assert!(m.min_neighborhood(&ch, 1e-3, BoundVariant::Combined).is_err());
        assert!(m.bsc_pe_lower(0.1, 10.0).is_err());
    }
}
