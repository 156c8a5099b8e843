//! Power models for classical schemes: uncoded repetition, dense block
//! codes with brute-force ML decoding, Viterbi decoding, and idealized
//! "one guess" sequential and syndrome decoders.

use std::f64::consts::LN_2;

use crate::channels::{crossover_from_snr, min_snr_for_rate, ChannelKind};
use crate::error::{domain, Error, Result};
use crate::numerics::{
    binary_entropy, bisect, error_exponent_random, error_exponent_sphere, gallager_e0_bsc,
    golden_section_min, log_q_function, Tolerances,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Repetition,
    BlockMl,
    Viterbi,
    MagicSequential,
    MagicSyndrome,
}

/// Which exponent models a dense block code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockExponent {
    /// Random-coding exponent: achievable.
    #[default]
    Random,
    /// Sphere-packing exponent: an upper limit on any block code.
    SpherePacking,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalScheme {
    pub kind: SchemeKind,
    pub rate: f64,
    /// Energy per decoding operation in units of the noise power.
    pub energy_per_op: f64,
    pub block_exponent: BlockExponent,
}

impl ClassicalScheme {
    pub fn new(kind: SchemeKind, rate: f64, energy_per_op: f64) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(domain("rate", rate, "(0, 1)"));
        }
        if !(energy_per_op >= 0.0) || !energy_per_op.is_finite() {
            return Err(domain("energy_per_op", energy_per_op, "finite and >= 0"));
        }
        if kind == SchemeKind::Repetition {
            repetitions(rate)?;
        }
        Ok(Self {
            kind,
            rate,
            energy_per_op,
            block_exponent: BlockExponent::Random,
        })
    }

    pub fn with_block_exponent(mut self, exponent: BlockExponent) -> Self {
        self.block_exponent = exponent;
        self
    }

    /// Error exponent in bits per unit of the size parameter (block
    /// length `m` or constraint length `L_c`).
    pub fn exponent_per_size(&self, snr: f64) -> Result<f64> {
        let p = crossover_from_snr(snr);
        match self.kind {
            SchemeKind::Repetition => Err(Error::Degenerate("repetition has no size parameter".into())),
            SchemeKind::BlockMl | SchemeKind::MagicSyndrome => {
                let e = match self.block_exponent {
                    BlockExponent::Random => error_exponent_random(self.rate, p)?,
                    BlockExponent::SpherePacking => error_exponent_sphere(self.rate, p)?,
                };
                feasible(e.bits, self.rate)
            }
            SchemeKind::Viterbi | SchemeKind::MagicSequential => {
                feasible(conv_error_exponent(self.rate, p)? / self.rate, self.rate)
            }
        }
    }

    /// Decoding operations per channel output, per unit of the size
    /// parameter, for the schemes whose cost is linear in size.
    fn linear_ops(&self) -> Option<f64> {
        match self.kind {
            SchemeKind::MagicSequential => Some(self.rate),
            SchemeKind::MagicSyndrome => Some((1.0 - self.rate) * self.rate),
            _ => None,
        }
    }
}

fn feasible(exponent: f64, rate: f64) -> Result<f64> {
    if exponent > 0.0 {
        Ok(exponent)
    } else {
        Err(Error::Infeasible(format!("rate {rate} is not below capacity")))
    }
}

fn repetitions(rate: f64) -> Result<u32> {
    let reps = 1.0 / rate;
    let r = reps.round();
    if (reps - r).abs() > 1e-9 * reps || (r as u32).is_multiple_of(2) {
        return Err(domain("rate", rate, "1/rate an odd integer for repetition"));
    }
    Ok(r as u32)
}

fn ln_binomial(n: u32, k: u32) -> f64 {
    (1..=k).map(|j| ((n - k + j) as f64 / j as f64).ln()).sum()
}

/// log2 of the majority-vote error probability of `reps` repetitions.
pub fn repetition_log2_pe(snr: f64, reps: u32) -> Result<f64> {
    if reps.is_multiple_of(2) {
        return Err(domain("reps", reps as f64, "odd"));
    }
    if !(snr >= 0.0) {
        return Err(domain("snr", snr, ">= 0"));
    }
    let x = snr.sqrt();
    let (ln_p, ln_q) = (log_q_function(x), log_q_function(-x));
    let terms: Vec<f64> = (reps / 2 + 1..=reps)
        .map(|j| ln_binomial(reps, j) + j as f64 * ln_p + (reps - j) as f64 * ln_q)
        .collect();
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ln_sum = m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln();
    Ok(ln_sum / LN_2)
}

pub fn repetition_pe(snr: f64, reps: u32) -> Result<f64> {
    Ok(repetition_log2_pe(snr, reps)?.exp2())
}

/// Convolutional-code exponent: `E0(rho*)` where `E0(rho*) = rho* R`.
pub fn conv_error_exponent(rate: f64, p: f64) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(domain("rate", rate, "> 0"));
    }
    if !(p > 0.0 && p <= 0.5) {
        return Err(domain("p", p, "(0, 1/2]"));
    }
    if rate >= 1.0 - binary_entropy(p)? {
        return Err(Error::Infeasible(format!("rate {rate} is not below the capacity at p = {p}")));
    }
    // E0(rho)/rho falls from C at 0 towards 0
    let gap = |rho: f64| gallager_e0_bsc(rho, p).unwrap_or(f64::NAN) - rho * rate;
    let mut hi = 1.0;
    while gap(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Bracket(format!("E0(rho)/rho stays above {rate}")));
        }
    }
    let lo = if hi > 1.0 { hi / 2.0 } else { 1e-18 };
    let rho = bisect(gap, lo, hi, &Tolerances::exhaustive())?;
    gallager_e0_bsc(rho, p)
}

/// log2 of the error probability at size `size` and transmit SNR `snr`.
pub fn scheme_pe(scheme: &ClassicalScheme, size: f64, snr: f64) -> Result<f64> {
    if scheme.kind == SchemeKind::Repetition {
        return repetition_log2_pe(snr, repetitions(scheme.rate)?);
    }
    if !(size >= 0.0) {
        return Err(domain("size", size, ">= 0"));
    }
    if size == 0.0 {
        return Ok(0.0);
    }
    Ok(-size * scheme.exponent_per_size(snr)?)
}

/// Decoding power per channel output in units of the noise power.
pub fn scheme_decode_power(scheme: &ClassicalScheme, size: f64) -> f64 {
    let (e, r) = (scheme.energy_per_op, scheme.rate);
    match scheme.kind {
        SchemeKind::Repetition => 0.0,
        SchemeKind::BlockMl | SchemeKind::Viterbi => e * (size * r).exp2() * size * r,
        SchemeKind::MagicSequential | SchemeKind::MagicSyndrome => {
            e * scheme.linear_ops().unwrap_or(0.0) * size
        }
    }
}

/// Jointly optimized operating point of a classical scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalOptimum {
    pub snr: f64,
    /// Size parameter as a real number (>= 1).
    pub size: f64,
    pub size_rounded: f64,
    pub decode_power: f64,
    pub total_power: f64,
}

const PRESCAN: usize = 64;

/// Minimizes `snr + decode power` subject to reaching `target_pe`.
///
/// For each SNR the size is pinned by the error constraint, so only a
/// one-dimensional search over SNR remains.
pub fn optimize_scheme(scheme: &ClassicalScheme, target_pe: f64) -> Result<ClassicalOptimum> {
    if !(target_pe > 0.0 && target_pe < 0.5) {
        return Err(domain("target_pe", target_pe, "(0, 1/2)"));
    }
    if scheme.kind == SchemeKind::Repetition {
        let reps = repetitions(scheme.rate)?;
        let target = target_pe.log2();
        let ln_snr = bisect(
            |u| repetition_log2_pe(u.exp(), reps).unwrap_or(f64::NAN) - target,
            -40.0,
            12.0,
            &Tolerances::exhaustive(),
        )?;
        let snr = ln_snr.exp();
        return Ok(ClassicalOptimum {
            snr,
            size: reps as f64,
            size_rounded: reps as f64,
            decode_power: 0.0,
            total_power: snr,
        });
    }
    let needed = -target_pe.log2();
    let size_at = |snr: f64| scheme.exponent_per_size(snr).map(|e| (needed / e).max(1.0));
    let total = |ln_snr: f64| {
        let snr = ln_snr.exp();
        size_at(snr).map_or(f64::INFINITY, |m| snr + scheme_decode_power(scheme, m))
    };
    let threshold = min_snr_for_rate(scheme.rate, ChannelKind::BscFromBpskHard)?;
    let lo = (threshold * (1.0 + 1e-9)).ln();
    let hi = (threshold * 1e3).ln();
    let grid: Vec<f64> = (0..PRESCAN)
        .map(|i| lo + (hi - lo) * i as f64 / (PRESCAN - 1) as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&u| total(u)).collect();
    let (i, best) = values
        .iter()
        .cloned()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    if !best.is_finite() {
        return Err(Error::Infeasible(format!("target {target_pe} unreachable for {:?}", scheme.kind)));
    }
    let tol = Tolerances {
        abs_tol: 1e-14,
        rel_tol: 1e-14,
        max_iter: 300,
    };
    let (u, _) = golden_section_min(total, grid[i.saturating_sub(1)], grid[(i + 1).min(PRESCAN - 1)], &tol);
    let snr = u.exp();
    let size = size_at(snr)?;
    let decode_power = scheme_decode_power(scheme, size);
    Ok(ClassicalOptimum {
        snr,
        size,
        size_rounded: size.ceil(),
        decode_power,
        total_power: snr + decode_power,
    })
}

/// Relative residual of the stationarity condition
/// `E = gamma L dE/dsnr` for the linear-cost schemes, where `E` is the
/// exponent per unit size, `L` the size and `gamma` the energy per unit
/// size. `None` for schemes without linear cost.
pub fn balance_residual(scheme: &ClassicalScheme, optimum: &ClassicalOptimum) -> Option<f64> {
    let gamma = scheme.energy_per_op * scheme.linear_ops()?;
    let s = optimum.snr;
    let h = s * 1e-5;
    let e = scheme.exponent_per_size(s).ok()?;
    let slope = (scheme.exponent_per_size(s + h).ok()? - scheme.exponent_per_size(s - h).ok()?) / (2.0 * h);
    Some((e - gamma * optimum.size * slope).abs() / e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::q_inverse;

    fn snr_for(p: f64) -> f64 {
        q_inverse(p).unwrap().powi(2)
    }

    #[test]
    fn repetition_three_at_tenth() {
        let pe = repetition_pe(snr_for(0.1), 3).unwrap();
        assert!((pe - 0.028).abs() < 1e-12);
        assert!((repetition_pe(0.0, 5).unwrap() - 0.5).abs() < 1e-15);
        assert!(repetition_pe(1e4, 3).unwrap() < 1e-300);
        assert!(repetition_pe(1.0, 4).is_err());
    }

    #[test]
    fn conv_exponent_at_cutoff() {
        let p = 0.05;
        let cutoff = gallager_e0_bsc(1.0, p).unwrap();
        let e = conv_error_exponent(cutoff, p).unwrap();
        assert!((e - cutoff).abs() < 1e-12);
    }

    #[test]
    fn decode_power_formulas() {
        let block = ClassicalScheme::new(SchemeKind::BlockMl, 1.0 / 3.0, 0.3).unwrap();
        let v = scheme_decode_power(&block, 10.0);
        assert!((v - 0.3 * 2f64.powf(10.0 / 3.0) * 10.0 / 3.0).abs() < 1e-12);
        assert!((v - 10.08).abs() < 0.01);
        let syn = ClassicalScheme::new(SchemeKind::MagicSyndrome, 1.0 / 3.0, 0.3).unwrap();
        assert!((scheme_decode_power(&syn, 30.0) - 2.0).abs() < 1e-12);
        let rep = ClassicalScheme::new(SchemeKind::Repetition, 1.0 / 3.0, 0.3).unwrap();
        assert_eq!(scheme_decode_power(&rep, 3.0), 0.0);
    }

    #[test]
    fn repetition_needs_odd_reciprocal() {
        assert!(ClassicalScheme::new(SchemeKind::Repetition, 0.5, 0.3).is_err());
        assert!(ClassicalScheme::new(SchemeKind::Repetition, 0.2, 0.3).is_ok());
    }

    #[test]
    fn pe_linear_in_size() {
        let s = ClassicalScheme::new(SchemeKind::Viterbi, 1.0 / 3.0, 0.3).unwrap();
        let a = scheme_pe(&s, 5.0, 4.0).unwrap();
        let b = scheme_pe(&s, 10.0, 4.0).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12);
        assert_eq!(scheme_pe(&s, 0.0, 4.0).unwrap(), 0.0);
        assert!(scheme_pe(&s, 5.0, 0.5).is_err());
    }
}
