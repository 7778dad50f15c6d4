//! Complex mini-kernel and special functions shared by every other module.
//!
//! All operations are pure functions on immutable inputs and safe to call
//! concurrently.

mod cmat;
pub(crate) mod quad;
mod special;
mod svd;

pub use cmat::{inner, norm, normalize, proj_energy, ComplexMat, ComplexVec};
pub use special::{
    bessel_i0, bessel_i0_scaled, digamma, e1_scaled, erfc, exp_integral_e1, inv_norm_cdf,
    ln_factorial, marcum_q1, norm_cdf, EULER_GAMMA,
};
pub use svd::{
    dominant_left_singular_vector, SVD_DEFAULT_MAX_ITERS, SVD_DEFAULT_TOL, SVD_DEGENERATE_GAP,
};
