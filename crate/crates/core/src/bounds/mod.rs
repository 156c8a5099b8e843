//! Lower bounds on the probability of error as a function of the decoding
//! neighborhood size, their inversion to a minimum neighborhood size, the
//! trivial bound and the random-coding upper bound.

mod family;
mod mappings;
mod neighborhood;

pub use mappings::{
    awgn_mapping_f, awgn_mapping_f_l, bsc_mapping_f, chernoff_awgn_tail, chernoff_bsc_tail,
    epsilon_tilde, mu_of_n, pe_floor_over_channel, phi_of_n, t_of_n, trivial_pe_lower,
    AwgnTail, TConvention,
};
pub use neighborhood::{
    awgn_pe_lower_asymptotic, awgn_pe_lower_numeric, bsc_pe_lower, bsc_pe_lower_at,
    min_neighborhood, quadratic_sqrt_n, upper_bound_neighborhood, BoundVariant,
    NeighborhoodBound,
};

use crate::channels::TestChannel;
use crate::error::{domain, Result};

/// An evaluated lower bound on the average bit-error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub n: f64,
    pub log2_pe_bound: f64,
    /// The test channel attaining the supremum.
    pub opt_test_channel: TestChannel,
    /// `1 - C(G)/R` at the optimizing test channel.
    pub delta: f64,
}

/// Iteration counts implied by a neighborhood size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationBounds {
    /// `log n / log alpha`: no fewer iterations can reach `n` nodes.
    pub l_lower: f64,
    /// `2 log n / log alpha + 2`: enough iterations for a random code.
    pub l_upper: f64,
    pub alpha: f64,
}

impl IterationBounds {
    pub fn new(n: f64, alpha: f64) -> Result<Self> {
        if !(alpha >= 2.0) {
            return Err(domain("alpha", alpha, ">= 2"));
        }
        if !(n >= 1.0) {
            return Err(domain("n", n, ">= 1"));
        }
        let l_lower = n.log2() / alpha.log2();
        Ok(Self {
            l_lower,
            l_upper: 2.0 * l_lower + 2.0,
            alpha,
        })
    }
}
