//! Lower and upper bounds on the neighborhood size of iterative decoders,
//! classical code power models, and joint transmit/decode power
//! optimization for the binary symmetric and Gaussian channels.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bounds;
pub mod channels;
pub mod classical;
pub mod error;
pub mod numerics;
pub mod optimizer;

pub use error::{Error, Result};
