//! Command-line front end: every subcommand writes one CSV table.
//!
//! Floats are written with 17 significant digits so repeated runs with
//! the same arguments produce byte-identical output. Rows that cannot be
//! computed are left out and reported on the diagnostic stream; the run
//! then exits with status 2.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use waterslide::asymptotics::{n_vs_gap_curve, PeTarget};
use waterslide::bounds::{BoundVariant, NeighborhoodBound};
use waterslide::channels::{min_snr_for_rate, shannon_waterfall_snr, to_db, ChannelKind, ChannelPoint};
use waterslide::classical::{optimize_scheme, ClassicalScheme, SchemeKind};
use waterslide::optimizer::{
    asymptotic_transmit_snr, uncoded_coding_threshold, PowerOptimizer, TechnologyWeights, WaterfallBaseline,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// BPSK over AWGN with hard decisions.
    Bsc,
    Awgn,
}

impl From<KindArg> for ChannelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Bsc => ChannelKind::BscFromBpskHard,
            KindArg::Awgn => ChannelKind::Awgn,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Asymptotic,
    Numeric,
    Combined,
}

impl From<VariantArg> for BoundVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Asymptotic => BoundVariant::Asymptotic,
            VariantArg::Numeric => BoundVariant::Numeric,
            VariantArg::Combined => BoundVariant::Combined,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Repetition,
    BlockMl,
    Viterbi,
    MagicSeq,
    MagicSyn,
}

impl From<SchemeArg> for SchemeKind {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Repetition => SchemeKind::Repetition,
            SchemeArg::BlockMl => SchemeKind::BlockMl,
            SchemeArg::Viterbi => SchemeKind::Viterbi,
            SchemeArg::MagicSeq => SchemeKind::MagicSequential,
            SchemeArg::MagicSyn => SchemeKind::MagicSyndrome,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineArg {
    RateDistortion,
    Capacity,
}

impl From<BaselineArg> for WaterfallBaseline {
    fn from(b: BaselineArg) -> Self {
        match b {
            BaselineArg::RateDistortion => WaterfallBaseline::RateDistortion,
            BaselineArg::Capacity => WaterfallBaseline::Capacity,
        }
    }
}

/// Parses `0.5` or `1/3`.
pub fn parse_rate(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            let den: f64 = den.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            num / den
        }
        None => s.trim().parse().map_err(|e| format!("{s}: {e}"))?,
    };
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(format!("{s}: rate must lie in (0, 1)"))
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "waterslide", version, about = "Datasets for waterfall and waterslide curves")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Code rate in bits per channel use; fractions like 1/3 are accepted.
    #[arg(long, global = true, default_value = "1/3", value_parser = parse_rate)]
    pub rate: f64,
    #[arg(long, global = true, value_enum, default_value_t = KindArg::Bsc)]
    pub kind: KindArg,
    /// Decoding energy per node per iteration, in SNR units.
    #[arg(long, global = true, default_value_t = 0.3)]
    pub gamma: f64,
    /// Node connectivity minus one.
    #[arg(long, global = true, default_value_t = 3.0)]
    pub alpha: f64,
    /// Energy per decoding operation for classical schemes.
    #[arg(long = "e", global = true, default_value_t = 0.3)]
    pub e_per_op: f64,
    #[arg(long, global = true, default_value_t = 1e-60)]
    pub pe_min: f64,
    #[arg(long, global = true, default_value_t = 1e-2)]
    pub pe_max: f64,
    #[arg(long, global = true, default_value_t = 30)]
    pub points: usize,
    #[arg(long, global = true, value_enum, default_value_t = VariantArg::Combined)]
    pub bound_variant: VariantArg,
    /// Report a whole number of decoding iterations (rounded up).
    #[arg(long, global = true)]
    pub integer_iterations: bool,
    /// Write the CSV here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Shannon waterfall: minimum SNR against target error probability.
    Waterfall,
    /// Lower bound on total power against target error probability.
    Waterslide,
    /// Optimized total power of a classical coding scheme.
    Classical {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
    },
    /// Optimal transmit SNR in the low error probability limit.
    OptimalPower {
        #[arg(long, default_value_t = 1e-3)]
        gamma_min: f64,
        #[arg(long, default_value_t = 10.0)]
        gamma_max: f64,
    },
    /// Error probability below which coding beats repetition.
    Threshold {
        #[arg(long, default_value_t = 1e-2)]
        gamma_min: f64,
        #[arg(long, default_value_t = 10.0)]
        gamma_max: f64,
        /// Connectivities to scan; defaults to --alpha.
        #[arg(long = "alphas", value_delimiter = ',')]
        alphas: Vec<f64>,
        #[arg(long, value_enum, default_value_t = BaselineArg::RateDistortion)]
        baseline: BaselineArg,
    },
    /// Minimum neighborhood size as the rate approaches capacity.
    Gapscan {
        /// Target error probability gap^beta.
        #[arg(long, conflicts_with = "balanced")]
        beta: Option<f64>,
        /// Target where the rate-distortion and coding gaps are equal.
        #[arg(long)]
        balanced: bool,
        #[arg(long, default_value_t = 1e-3)]
        gap_min: f64,
        #[arg(long, default_value_t = 1e-1)]
        gap_max: f64,
        /// BSC crossover probability.
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        /// AWGN SNR; by default the one with capacity 0.531.
        #[arg(long)]
        snr: Option<f64>,
    },
    /// Lower bound on error probability against neighborhood size.
    Boundscan {
        #[arg(long, default_value_t = 1.0)]
        snr: f64,
        #[arg(long, default_value_t = 1.0)]
        n_min: f64,
        #[arg(long, default_value_t = 1e9)]
        n_max: f64,
    },
}

/// Capacity used for the default AWGN gap scan.
const GAPSCAN_AWGN_CAPACITY: f64 = 0.531;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Fixed-width scientific format with 17 significant digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// `points` values from `hi` down to `lo`, evenly spaced in log.
pub fn log_grid_desc(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (hi.log10(), lo.log10());
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| match i {
            0 => hi,
            i if i + 1 == points => lo,
            i => 10f64.powf(a + (b - a) * i as f64 / last),
        })
        .collect()
}

struct Table<'a> {
    out: &'a mut dyn Write,
    diag: &'a mut dyn Write,
    skipped: usize,
}

impl Table<'_> {
    fn header(&mut self, cols: &[&str]) -> std::io::Result<()> {
        writeln!(self.out, "{}", cols.join(","))
    }

    fn row(&mut self, values: &[f64]) -> std::io::Result<()> {
        let cells: Vec<String> = values.iter().map(|&v| fmt(v)).collect();
        writeln!(self.out, "{}", cells.join(","))
    }

    fn skip(&mut self, at: &str, why: impl std::fmt::Display) -> std::io::Result<()> {
        self.skipped += 1;
        writeln!(self.diag, "infeasible at {at}: {why}")
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), Failure> {
        if self.points < 2 {
            return usage("--points must be at least 2");
        }
        if !(self.pe_min > 0.0 && self.pe_min < self.pe_max && self.pe_max < 0.5) {
            return usage("need 0 < --pe-min < --pe-max < 0.5");
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return usage("--gamma must be positive");
        }
        if !(self.alpha >= 2.0 && self.alpha.is_finite()) {
            return usage("--alpha must be at least 2");
        }
        if !(self.e_per_op >= 0.0 && self.e_per_op.is_finite()) {
            return usage("--e must be non-negative");
        }
        Ok(())
    }

    fn kind(&self) -> ChannelKind {
        self.kind.into()
    }

    fn weights(&self) -> Result<TechnologyWeights, Failure> {
        TechnologyWeights::new(self.gamma, self.alpha).or_else(|e| usage(e.to_string()))
    }

    fn pe_grid(&self) -> Vec<f64> {
        log_grid_desc(self.pe_min, self.pe_max, self.points)
    }
}

/// Runs one subcommand, writing CSV to `out` and diagnostics to `diag`.
/// Returns the process exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> u8 {
    let mut table = Table { out, diag, skipped: 0 };
    let result = config.validate().and_then(|()| dispatch(config, &mut table));
    match result {
        Ok(()) if table.skipped == 0 => EXIT_OK,
        Ok(()) => {
            let _ = writeln!(table.diag, "{} row(s) omitted", table.skipped);
            EXIT_INFEASIBLE
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(table.diag, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(table.diag, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(config: &RunConfig, table: &mut Table) -> Result<(), Failure> {
    match &config.command {
        Command::Waterfall => waterfall(config, table),
        Command::Waterslide => waterslide(config, table),
        Command::Classical { scheme } => classical(config, *scheme, table),
        Command::OptimalPower { gamma_min, gamma_max } => optimal_power(config, *gamma_min, *gamma_max, table),
        Command::Threshold {
            gamma_min,
            gamma_max,
            alphas,
            baseline,
        } => threshold(config, *gamma_min, *gamma_max, alphas, *baseline, table),
        Command::Gapscan {
            beta,
            balanced,
            gap_min,
            gap_max,
            p,
            snr,
        } => gapscan(config, *beta, *balanced, (*gap_min, *gap_max), *p, *snr, table),
        Command::Boundscan { snr, n_min, n_max } => boundscan(config, *snr, *n_min, *n_max, table),
    }
}

fn waterfall(config: &RunConfig, table: &mut Table) -> Result<(), Failure> {
    table.header(&["log10_pe", "snr_linear", "snr_db"])?;
    for pe in config.pe_grid() {
        match shannon_waterfall_snr(config.rate, pe, config.kind()) {
            Ok(snr) => table.row(&[pe.log10(), snr, to_db(snr)])?,
            Err(e) => table.skip(&format!("pe={pe:e}"), e)?,
        }
    }
    Ok(())
}

fn waterslide(config: &RunConfig, table: &mut Table) -> Result<(), Failure> {
    let weights = config.weights()?;
    let optimizer = PowerOptimizer::new(config.rate, config.kind(), config.bound_variant.into())
        .or_else(|e| usage(e.to_string()))?;
    table.header(&[
        "log10_pe",
        "snr_linear",
        "snr_db",
        "n",
        "iterations",
        "decode_power_norm",
        "total_norm",
        "total_db",
    ])?;
    let pes = config.pe_grid();
    let points = optimizer
        .waterslide_curve(&weights, &pes)
        .or_else(|e| usage(e.to_string()))?;
    for (pe, point) in pes.iter().zip(points) {
        match point {
            Ok(w) => {
                let (iterations, decode) = if config.integer_iterations {
                    let l = w.iterations.ceil().max(1.0);
                    (l, weights.gamma() * weights.alpha().log2() * l)
                } else {
                    (w.iterations, w.decode_power_norm)
                };
                let total = w.snr_transmit + decode;
                table.row(&[
                    pe.log10(),
                    w.snr_transmit,
                    to_db(w.snr_transmit),
                    w.n,
                    iterations,
                    decode,
                    total,
                    to_db(total),
                ])?
            }
            Err(e) => table.skip(&format!("pe={pe:e}"), e)?,
        }
    }
    Ok(())
}

fn classical(config: &RunConfig, scheme: SchemeArg, table: &mut Table) -> Result<(), Failure> {
    let scheme = ClassicalScheme::new(scheme.into(), config.rate, config.e_per_op).or_else(|e| usage(e.to_string()))?;
    table.header(&["log10_pe", "snr_db", "size", "decode_power_norm", "total_db"])?;
    for pe in config.pe_grid() {
        match optimize_scheme(&scheme, pe) {
            Ok(opt) => table.row(&[
                pe.log10(),
                to_db(opt.snr),
                opt.size,
                opt.decode_power,
                to_db(opt.total_power),
            ])?,
            Err(e) => table.skip(&format!("pe={pe:e}"), e)?,
        }
    }
    Ok(())
}

fn gamma_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return usage("need 0 < --gamma-min < --gamma-max");
    }
    let mut grid = log_grid_desc(lo, hi, points);
    grid.reverse();
    Ok(grid)
}

fn optimal_power(config: &RunConfig, lo: f64, hi: f64, table: &mut Table) -> Result<(), Failure> {
    let floor = min_snr_for_rate(config.rate, config.kind()).or_else(|e| usage(e.to_string()))?;
    table.header(&["gamma", "snr_opt", "excess_over_shannon"])?;
    for gamma in gamma_grid(lo, hi, config.points)? {
        match asymptotic_transmit_snr(config.rate, gamma, config.kind()) {
            Ok(snr) => table.row(&[gamma, snr, snr / floor - 1.0])?,
            Err(e) => table.skip(&format!("gamma={gamma:e}"), e)?,
        }
    }
    Ok(())
}

fn threshold(
    config: &RunConfig,
    lo: f64,
    hi: f64,
    alphas: &[f64],
    baseline: BaselineArg,
    table: &mut Table,
) -> Result<(), Failure> {
    let alphas = if alphas.is_empty() { vec![config.alpha] } else { alphas.to_vec() };
    if alphas.iter().any(|a| !(*a >= 2.0 && a.is_finite())) {
        return usage("--alphas must all be at least 2");
    }
    let gammas = gamma_grid(lo, hi, config.points)?;
    table.header(&["gamma", "alpha", "pe_threshold"])?;
    for &alpha in &alphas {
        for &gamma in &gammas {
            match uncoded_coding_threshold(config.rate, gamma, alpha, config.kind(), baseline.into()) {
                Ok(pe) => table.row(&[gamma, alpha, pe])?,
                Err(e) => table.skip(&format!("gamma={gamma:e} alpha={alpha}"), e)?,
            }
        }
    }
    Ok(())
}

fn gapscan(
    config: &RunConfig,
    beta: Option<f64>,
    balanced: bool,
    (gap_min, gap_max): (f64, f64),
    p: f64,
    snr: Option<f64>,
    table: &mut Table,
) -> Result<(), Failure> {
    let target = match (beta, balanced) {
        (_, true) => PeTarget::Balanced,
        (Some(b), false) if b > 0.0 => PeTarget::Power(b),
        (Some(_), false) => return usage("--beta must be positive"),
        (None, false) => PeTarget::Power(1.0),
    };
    let channel = match config.kind {
        KindArg::Bsc => ChannelPoint::bsc_with_crossover(p),
        KindArg::Awgn => {
            let snr = snr.unwrap_or_else(|| (2.0 * GAPSCAN_AWGN_CAPACITY).exp2() - 1.0);
            ChannelPoint::awgn(snr)
        }
    }
    .or_else(|e| usage(e.to_string()))?;
    if !(gap_min > 0.0 && gap_min < gap_max && gap_max < channel.capacity()) {
        return usage(format!("need 0 < --gap-min < --gap-max < capacity {}", channel.capacity()));
    }
    let mut gaps = log_grid_desc(gap_min, gap_max, config.points);
    gaps.reverse();
    table.header(&["gap", "log2_gap", "n", "log2_n"])?;
    for point in n_vs_gap_curve(target, &channel, &gaps, config.bound_variant.into()) {
        if point.n.is_nan() || point.n == f64::INFINITY {
            table.skip(&format!("gap={:e}", point.gap), "bound cannot be inverted")?;
        } else {
            table.row(&[point.gap, point.gap.log2(), point.n, point.n.log2()])?;
        }
    }
    Ok(())
}

fn boundscan(config: &RunConfig, snr: f64, n_min: f64, n_max: f64, table: &mut Table) -> Result<(), Failure> {
    if !(n_min > 0.0 && n_min < n_max && n_max.is_finite()) {
        return usage("need 0 < --n-min < --n-max");
    }
    let channel = ChannelPoint::new(config.kind(), snr).or_else(|e| usage(e.to_string()))?;
    let bound = NeighborhoodBound::new(config.rate, config.kind()).or_else(|e| usage(e.to_string()))?;
    let mut ns = log_grid_desc(n_min, n_max, config.points);
    ns.reverse();
    table.header(&["n", "log2_pe_lower", "log10_pe_lower"])?;
    for n in ns {
        match bound.log2_pe_lower(&channel, n, config.bound_variant.into()) {
            Ok(l) if l.is_finite() => table.row(&[n, l, l * std::f64::consts::LOG10_2])?,
            Ok(_) => table.skip(&format!("n={n:e}"), "no admissible test channel")?,
            Err(e) => table.skip(&format!("n={n:e}"), e)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates_parse() {
        assert_eq!(parse_rate("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_rate("0.5").unwrap(), 0.5);
        assert!(parse_rate("3/2").is_err());
        assert!(parse_rate("x").is_err());
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = log_grid_desc(1e-60, 1e-2, 30);
        assert_eq!(g.len(), 30);
        assert_eq!(g[0], 1e-2);
        assert_eq!(g[29], 1e-60);
        assert!(g.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt(1.0 / 3.0), "3.3333333333333331e-1");
    }
}
