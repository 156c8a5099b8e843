//! Test-channel families indexed by `delta = 1 - C(G)/R`.
//!
//! Parametrizing by `delta` rather than by the crossover or variance ratio
//! puts grid points where the bounds change fastest (near capacity) and
//! avoids the cancellation in `1 - C(G)/R` there. Every node quantity that
//! depends only on the rate is computed once per family.

use std::f64::consts::LN_2;

use super::neighborhood::quadratic_sqrt_n;
use crate::channels::{awgn_capacity, bsc_capacity, TestChannel};
use crate::error::Result;
use crate::numerics::{
    binary_entropy_inv, chernoff_k_grid, golden_section_min, kl_bernoulli, kl_gaussian_var,
    log1p_excess_inv, Tolerances,
};

pub(crate) const GRID_POINTS: usize = 512;
pub(crate) const DELTA_MIN: f64 = 1e-15;
const AWGN_DELTA_MAX: f64 = 0.99;
const K_POINTS: usize = 256;

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Supremum over a family: the score, where it is attained, and the test
/// channel there.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sup {
    pub score: f64,
    pub delta: f64,
    pub channel: TestChannel,
}

/// Best grid point by `scores`, then golden-section refinement in
/// `ln delta` between its neighbours. Returns `(delta, score)`.
fn refine_max(grid: &[f64], scores: &[f64], mut score_at: impl FnMut(f64) -> f64) -> Option<(f64, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &s) in scores.iter().enumerate() {
        if s > f64::NEG_INFINITY && best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    let (i, value) = best?;
    if value == f64::INFINITY {
        return Some((grid[i], value));
    }
    let lo = grid[i.saturating_sub(1)].ln();
    let hi = grid[(i + 1).min(grid.len() - 1)].ln();
    let tol = Tolerances {
        abs_tol: 1e-9,
        rel_tol: 1e-12,
        max_iter: 100,
    };
    let (u, neg) = golden_section_min(
        |u| {
            let v = score_at(u.exp());
            if v.is_nan() {
                f64::INFINITY
            } else {
                -v
            }
        },
        lo,
        hi,
        &tol,
    );
    Some(if -neg > value { (u.exp(), -neg) } else { (grid[i], value) })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct BscNode {
    g: f64,
    log_odds_g: f64,
    log2_floor: f64,
    eps: f64,
}

impl BscNode {
    pub fn new(rate: f64, delta: f64) -> Result<Self> {
        let g = binary_entropy_inv(1.0 - rate * (1.0 - delta))?;
        let y = binary_entropy_inv(delta)?;
        let (k, _) = chernoff_k_grid(g, K_POINTS)?;
        Ok(Self {
            g,
            log_odds_g: g.ln() - (-g).ln_1p(),
            log2_floor: (y / 2.0).log2(),
            eps: ((2.0 / y).log2() / k).sqrt(),
        })
    }

    /// `(a, b)` such that the bound is `floor - a n - b sqrt(n)` in bits.
    fn coeffs(&self, p: f64) -> Option<(f64, f64)> {
        if !(self.g > p) {
            return None;
        }
        let a = kl_bernoulli(self.g, p).ok()?;
        let odds = (self.log_odds_g - (p.ln() - (-p).ln_1p())) / LN_2;
        Some((a, self.eps * odds))
    }

    fn log2_bound(&self, p: f64, n: f64) -> f64 {
        match self.coeffs(p) {
            Some((a, b)) => self.log2_floor - a * n - b * n.sqrt(),
            None => f64::NEG_INFINITY,
        }
    }

    fn n_needed(&self, p: f64, log2_target: f64) -> f64 {
        match self.coeffs(p) {
            Some((a, b)) => quadratic_sqrt_n(a, b, log2_target - self.log2_floor),
            None => f64::NEG_INFINITY,
        }
    }
}

pub(crate) struct BscFamily {
    rate: f64,
    g_min: f64,
    deltas: Vec<f64>,
    nodes: Vec<BscNode>,
}

impl BscFamily {
    pub fn new(rate: f64) -> Result<Self> {
        let deltas = log_grid(DELTA_MIN, 1.0, GRID_POINTS);
        let nodes = deltas
            .iter()
            .map(|&d| BscNode::new(rate, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rate,
            g_min: binary_entropy_inv(1.0 - rate)?,
            deltas,
            nodes,
        })
    }

    fn node_at(&self, delta: f64) -> Option<BscNode> {
        BscNode::new(self.rate, delta).ok()
    }

    /// Test channel `g = p` when the channel is at or below capacity:
    /// the limit of the supremum as `g` decreases to `p`.
    fn boundary(&self, p: f64) -> Option<(f64, f64)> {
        if p <= self.g_min {
            return None;
        }
        let delta = 1.0 - bsc_capacity(p) / self.rate;
        let y = binary_entropy_inv(delta.clamp(0.0, 1.0)).ok()?;
        Some((delta, (y / 2.0).log2()))
    }

    pub fn sup_log2(&self, p: f64, n: f64) -> Sup {
        let scores: Vec<f64> = self.nodes.iter().map(|nd| nd.log2_bound(p, n)).collect();
        let refined = refine_max(&self.deltas, &scores, |d| {
            self.node_at(d).map_or(f64::NEG_INFINITY, |nd| nd.log2_bound(p, n))
        });
        let mut best = refined.map(|(delta, score)| Sup {
            score,
            delta,
            channel: TestChannel::Bsc {
                crossover: self.node_at(delta).map_or(f64::NAN, |nd| nd.g),
            },
        });
        if let Some((delta, score)) = self.boundary(p) {
            if best.is_none_or(|b| score > b.score) {
                best = Some(Sup {
                    score,
                    delta,
                    channel: TestChannel::Bsc { crossover: p },
                });
            }
        }
        best.expect("boundary candidate exists whenever no node lies above p")
    }

    /// Smallest real `n >= 0` with the sphere-packing bound at or below the target.
    pub fn min_n(&self, p: f64, log2_target: f64) -> f64 {
        if let Some((_, floor)) = self.boundary(p) {
            if log2_target < floor {
                return f64::INFINITY;
            }
        }
        let needs: Vec<f64> = self.nodes.iter().map(|nd| nd.n_needed(p, log2_target)).collect();
        refine_max(&self.deltas, &needs, |d| {
            self.node_at(d).map_or(f64::NEG_INFINITY, |nd| nd.n_needed(p, log2_target))
        })
        .map_or(0.0, |(_, n)| n.max(0.0))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct AwgnNode {
    ln_floor: f64,
    spread: f64,
    /// `2^{2R(1 - delta)} - 1`, the SNR at which the test channel has
    /// capacity `R(1 - delta)`; the variance ratio is `snr / growth`.
    growth: f64,
}

/// Which form of the Gaussian bound a score refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum GaussForm {
    Asymptotic,
    Numeric,
}

impl AwgnNode {
    pub fn new(rate: f64, delta: f64) -> Result<Self> {
        let y = binary_entropy_inv(delta)?;
        Ok(Self {
            ln_floor: (y / 2.0).ln(),
            spread: 1.5 + 2.0 * (2.0 / y).ln(),
            growth: (2.0 * rate * (1.0 - delta) * LN_2).exp_m1(),
        })
    }

    fn var_ratio(&self, snr: f64) -> f64 {
        snr / self.growth
    }

    fn asymptotic_coeffs(&self, snr: f64) -> Option<(f64, f64)> {
        let v = self.var_ratio(snr);
        if !(v >= 1.0) {
            return None;
        }
        Some((kl_gaussian_var(v, 1.0).ok()?, self.spread * (v - 1.0)))
    }

    fn ln_bound(&self, snr: f64, n: f64, form: GaussForm, mu: f64) -> f64 {
        let v = self.var_ratio(snr);
        match form {
            GaussForm::Asymptotic => match self.asymptotic_coeffs(snr) {
                Some((a, b)) => self.ln_floor - a * n - b * n.sqrt(),
                None => f64::NEG_INFINITY,
            },
            GaussForm::Numeric => {
                if !(v >= 1.0 && v > mu) {
                    return f64::NEG_INFINITY;
                }
                let d = kl_gaussian_var(v, 1.0).unwrap_or(f64::NAN);
                let eps = log1p_excess_inv(-2.0 / n * self.ln_floor).unwrap_or(f64::NAN);
                self.ln_floor - n * d - 0.5 * n * eps * (v - 1.0)
            }
        }
    }

    fn n_needed(&self, snr: f64, ln_target: f64) -> f64 {
        match self.asymptotic_coeffs(snr) {
            Some((a, b)) => quadratic_sqrt_n(a, b, ln_target - self.ln_floor),
            None => f64::NEG_INFINITY,
        }
    }
}

pub(crate) struct AwgnFamily {
    rate: f64,
    deltas: Vec<f64>,
    nodes: Vec<AwgnNode>,
}

impl AwgnFamily {
    pub fn new(rate: f64) -> Result<Self> {
        let deltas = log_grid(DELTA_MIN, AWGN_DELTA_MAX, GRID_POINTS);
        let nodes = deltas
            .iter()
            .map(|&d| AwgnNode::new(rate, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rate,
            deltas,
            nodes,
        })
    }

    fn node_at(&self, delta: f64) -> Option<AwgnNode> {
        AwgnNode::new(self.rate, delta).ok()
    }

    /// Variance ratio 1 when the channel is at or below capacity.
    fn boundary(&self, snr: f64) -> Option<(f64, f64)> {
        let cap = awgn_capacity(snr);
        if cap >= self.rate {
            return None;
        }
        let delta = 1.0 - cap / self.rate;
        let y = binary_entropy_inv(delta).ok()?;
        Some((delta, (y / 2.0).ln()))
    }

    /// Supremum of the natural-log bound; `None` if no test channel is
    /// admissible.
    pub fn sup_ln(&self, snr: f64, n: f64, form: GaussForm, mu: f64) -> Option<Sup> {
        let scores: Vec<f64> = self.nodes.iter().map(|nd| nd.ln_bound(snr, n, form, mu)).collect();
        let refined = refine_max(&self.deltas, &scores, |d| {
            self.node_at(d).map_or(f64::NEG_INFINITY, |nd| nd.ln_bound(snr, n, form, mu))
        });
        let mut best = refined.map(|(delta, score)| Sup {
            score,
            delta,
            channel: TestChannel::Awgn {
                var_ratio: self.node_at(delta).map_or(f64::NAN, |nd| nd.var_ratio(snr)),
            },
        });
        let boundary_ok = form == GaussForm::Asymptotic || mu < 1.0;
        if let Some((delta, score)) = self.boundary(snr).filter(|_| boundary_ok) {
            if best.is_none_or(|b| score > b.score) {
                best = Some(Sup {
                    score,
                    delta,
                    channel: TestChannel::Awgn { var_ratio: 1.0 },
                });
            }
        }
        best
    }

    /// Closed-form inversion of the asymptotic bound.
    pub fn min_n_asymptotic(&self, snr: f64, ln_target: f64) -> f64 {
        if let Some((_, floor)) = self.boundary(snr) {
            if ln_target < floor {
                return f64::INFINITY;
            }
        }
        let needs: Vec<f64> = self.nodes.iter().map(|nd| nd.n_needed(snr, ln_target)).collect();
        refine_max(&self.deltas, &needs, |d| {
            self.node_at(d).map_or(f64::NEG_INFINITY, |nd| nd.n_needed(snr, ln_target))
        })
        .map_or(0.0, |(_, n)| n.max(0.0))
    }
}
