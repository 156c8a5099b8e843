//! Scalar primitives shared by the rest of the crate: entropies, divergences,
//! the Gaussian tail, the lower branch of Lambert W and Gallager exponents.

mod entropy;
mod exponents;
mod lambert;
mod roots;
mod special;

pub use entropy::{
    binary_entropy, binary_entropy_inv, hb_bound_pair, kl_bernoulli, kl_gaussian_var, HbBounds,
};
pub use exponents::{
    chernoff_k, error_exponent_random, error_exponent_sphere, gallager_e0_bsc, Exponent,
    SPHERE_RHO_CAP,
};
pub use lambert::{lambert_w_lower, log1p_excess_inv};
pub use roots::{bisect, golden_section_min, Tolerances};
pub use special::{log_q_function, q_function, q_inverse};

pub(crate) use entropy::ln_excess;
pub(crate) use exponents::chernoff_k_grid;
