//! Cube-split Grassmannian constellations for non-coherent SIMO links over
//! Rayleigh block fading.
//!
//! The crate provides the constellation construction, its Gray-like binary
//! labeling, a low-complexity greedy decoder with exact and approximate
//! bit-LLR computation, Monte Carlo error-rate and achievable-rate
//! estimators, closed-form/quadrature error analysis, and the coherent
//! pilot-based, exp-map and Fourier baselines used for comparison.

pub mod analytics;
pub mod baselines;
pub mod channel;
pub mod codec;
pub mod cubesplit;
pub mod error;
pub mod grassmann;
pub mod numerics;
pub mod rng;

pub use error::{Error, Result};
pub use grassmann::GrassmannPoint;
