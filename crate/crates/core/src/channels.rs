//! Channel operating points, capacities and capacity inversion.

use std::f64::consts::LN_2;

use crate::error::{domain, Result};
use crate::numerics::{binary_entropy, binary_entropy_inv, q_function, q_inverse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    /// BPSK over AWGN followed by hard decisions, seen as a BSC.
    BscFromBpskHard,
    Awgn,
}

/// A physical operating point: channel family plus linear transmit SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPoint {
    kind: ChannelKind,
    snr: f64,
}

impl ChannelPoint {
    pub fn new(kind: ChannelKind, snr: f64) -> Result<Self> {
        if !(snr >= 0.0) || !snr.is_finite() {
            return Err(domain("snr", snr, "finite and >= 0"));
        }
        Ok(Self { kind, snr })
    }

    pub fn bsc(snr: f64) -> Result<Self> {
        Self::new(ChannelKind::BscFromBpskHard, snr)
    }

    pub fn awgn(snr: f64) -> Result<Self> {
        Self::new(ChannelKind::Awgn, snr)
    }

    /// BSC point whose hard-decision crossover equals `p`.
    ///
    /// Not physical in itself: the SNR is back-computed as `Q^{-1}(p)^2` so
    /// that tests can be phrased in terms of `p`.
    pub fn bsc_with_crossover(p: f64) -> Result<Self> {
        let x = q_inverse(p)?;
        Self::bsc(x * x)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    /// Hard-decision crossover probability `Q(sqrt(snr))`.
    pub fn crossover(&self) -> f64 {
        crossover_from_snr(self.snr)
    }

    pub fn capacity(&self) -> f64 {
        match self.kind {
            ChannelKind::BscFromBpskHard => bsc_capacity(self.crossover()),
            ChannelKind::Awgn => awgn_capacity(self.snr),
        }
    }
}

/// The hypothetical channel swept inside the lower bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestChannel {
    Bsc { crossover: f64 },
    /// Test-channel noise variance relative to the true noise variance.
    Awgn { var_ratio: f64 },
}

impl TestChannel {
    /// Capacity in bits per use; the AWGN case needs the transmit SNR.
    pub fn capacity(&self, snr: f64) -> f64 {
        match *self {
            TestChannel::Bsc { crossover } => bsc_capacity(crossover),
            TestChannel::Awgn { var_ratio } => awgn_capacity(snr / var_ratio),
        }
    }
}

pub fn crossover_from_snr(snr: f64) -> f64 {
    q_function(snr.max(0.0).sqrt())
}

pub fn bsc_capacity(p: f64) -> f64 {
    1.0 - binary_entropy(p.clamp(0.0, 1.0)).unwrap_or(f64::NAN)
}

pub fn awgn_capacity(snr: f64) -> f64 {
    0.5 * snr.ln_1p() / LN_2
}

/// Smallest SNR whose capacity equals `rate`.
pub fn min_snr_for_rate(rate: f64, kind: ChannelKind) -> Result<f64> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(domain("rate", rate, "finite and >= 0"));
    }
    if rate == 0.0 {
        return Ok(0.0);
    }
    match kind {
        ChannelKind::Awgn => Ok((2.0 * rate * LN_2).exp_m1()),
        ChannelKind::BscFromBpskHard => {
            if rate >= 1.0 {
                return Err(domain("rate", rate, "< 1 for the BSC"));
            }
            let p = binary_entropy_inv(1.0 - rate)?;
            let x = q_inverse(p)?;
            Ok(x * x)
        }
    }
}

/// SNR on the Shannon waterfall: capacity reduced by the rate-distortion
/// factor `1 - h_b(pe)`.
pub fn shannon_waterfall_snr(rate: f64, pe: f64, kind: ChannelKind) -> Result<f64> {
    if !(0.0..=0.5).contains(&pe) {
        return Err(domain("pe", pe, "[0, 1/2]"));
    }
    min_snr_for_rate(rate * (1.0 - binary_entropy(pe)?), kind)
}

/// Converts a linear power ratio to decibels.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossover_values() {
        assert_eq!(crossover_from_snr(0.0), 0.5);
        assert!((crossover_from_snr(1.0) - 0.158_655_253_931_457).abs() < 1e-14);
        assert!((crossover_from_snr(4.0) - 0.022_750_131_948_179).abs() < 1e-14);
    }

    #[test]
    fn capacities() {
        assert_eq!(bsc_capacity(0.5), 0.0);
        assert!((bsc_capacity(0.1) - 0.531_004_406_410_719).abs() < 1e-12);
        assert!((ChannelPoint::awgn(3.0).unwrap().capacity() - 1.0).abs() < 1e-15);
        let t = TestChannel::Awgn { var_ratio: 3.0 };
        assert!((t.capacity(9.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn threshold_values() {
        let awgn = min_snr_for_rate(1.0 / 3.0, ChannelKind::Awgn).unwrap();
        assert!((awgn - (2f64.powf(2.0 / 3.0) - 1.0)).abs() < 1e-15);
        let bsc = min_snr_for_rate(1.0 / 3.0, ChannelKind::BscFromBpskHard).unwrap();
        assert!((bsc - 0.881_085_06).abs() < 1e-7);
        assert!((crossover_from_snr(bsc) - 0.1740).abs() < 1e-4);
        assert!(min_snr_for_rate(1.0, ChannelKind::BscFromBpskHard).is_err());
        assert!(min_snr_for_rate(1e-12, ChannelKind::Awgn).unwrap() < 1e-11);
    }

    #[test]
    fn crossover_constructor_round_trip() {
        let c = ChannelPoint::bsc_with_crossover(0.05).unwrap();
        assert!((c.crossover() / 0.05 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn waterfall_limits() {
        let kind = ChannelKind::BscFromBpskHard;
        let r = 1.0 / 3.0;
        let floor = min_snr_for_rate(r, kind).unwrap();
        assert_eq!(shannon_waterfall_snr(r, 0.0, kind).unwrap(), floor);
        assert_eq!(shannon_waterfall_snr(r, 0.5, kind).unwrap(), 0.0);
        let at = shannon_waterfall_snr(r, 1e-3, kind).unwrap();
        assert!(at < floor && at > 0.9 * floor);
    }

    #[test]
    fn rejects_bad_snr() {
        assert!(ChannelPoint::bsc(-1.0).is_err());
        assert!(ChannelPoint::awgn(f64::NAN).is_err());
    }
}
