//! Rayleigh block-fading simulation and the analytic quantities attached
//! to it: log-likelihoods, high-SNR capacity and the pairwise-error union
//! bound.
//!
//! Monte Carlo engines live in [`sweep`]; every trial draws from its own
//! counter-based substream so results are independent of worker count.

mod sweep;

pub use sweep::{
    estimate_rate, llr_histogram, run_error_sweep, wilson_halfwidth, with_workers, write_llr_fit,
    write_sweep_csv, CiMode, DecoderKind, ErrorRates, ExpFit, LlrHistogram, RateEstimate,
    SweepRow,
};

use crate::grassmann::GrassmannPoint;
use crate::numerics::{digamma, ln_factorial, proj_energy, ComplexMat};
use crate::rng;
use rand::Rng;
use std::f64::consts::{LN_2, PI};

/// Block-fading channel parameters for one simulation point.
#[derive(Debug, Clone)]
pub struct ChannelConfig {
    /// Coherence block length T >= 2.
    pub t: usize,
    /// Receive antennas N >= 1.
    pub n: usize,
    /// SNR per receive antenna, linear.
    pub rho: f64,
    /// Seed of the counter-based trial streams.
    pub seed: u64,
    /// Monte Carlo trials.
    pub trials: u64,
}

impl ChannelConfig {
    pub fn new(t: usize, n: usize, rho: f64) -> Self {
        Self {
            t,
            n,
            rho,
            seed: 0,
            trials: 10_000,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.t < 2 {
            return Err(crate::Error::InvalidParams("T must be >= 2".into()));
        }
        if self.n < 1 {
            return Err(crate::Error::InvalidParams("N must be >= 1".into()));
        }
        if !(self.rho > 0.0) {
            return Err(crate::Error::InvalidParams("rho must be positive".into()));
        }
        Ok(())
    }

    /// SNR in decibels.
    pub fn snr_db(&self) -> f64 {
        10.0 * self.rho.log10()
    }
}

/// One received block together with the transmitted index (simulation-side
/// ground truth).
#[derive(Debug, Clone)]
pub struct ReceivedBlock {
    pub y: ComplexMat,
    pub tx_index: usize,
}

/// Draws Y = sqrt(rho T) x h^T + Z with h ~ CN(0, I_N) and iid CN(0,1)
/// noise.  The channel vector is drawn first, then the noise column-major,
/// so a fixed substream yields a bit-identical block.
pub fn simulate_block<R: Rng + ?Sized>(
    cfg: &ChannelConfig,
    x: &GrassmannPoint,
    rng: &mut R,
) -> ComplexMat {
    debug_assert_eq!(x.dim(), cfg.t);
    let amp = (cfg.rho * cfg.t as f64).sqrt();
    let h = rng::complex_normal_vec(rng, cfg.n);
    let mut y = ComplexMat::outer(x.coords(), &h).scale(amp.into());
    for c in 0..cfg.n {
        for r in 0..cfg.t {
            let z = rng::complex_normal(rng);
            y.set(r, c, y.get(r, c) + z);
        }
    }
    y
}

/// Log-density of the observation given the transmitted unit-norm symbol:
/// -||Y||_F^2 + (rho T/(1 + rho T)) ||Y^H x||^2 - N(T ln pi + ln(1 + rho T)).
///
/// The normalization carries the factor N (one per receive antenna); all
/// decision rules and rate estimates use only differences, where it
/// cancels.
pub fn likelihood_log(x: &GrassmannPoint, y: &ComplexMat, rho: f64) -> f64 {
    let t = y.rows() as f64;
    let n = y.cols() as f64;
    let coef = rho * t / (1.0 + rho * t);
    -y.frob_norm_sq() + coef * proj_energy(y, x.coords()) - n * (t * PI.ln() + (1.0 + rho * t).ln())
}

/// High-SNR capacity (1 - 1/T) log2(rho) + c(N, T) in bits per channel
/// use, with the constant
/// c(N,T) = (1/T) log2((L-1)!/((N-1)!(T-1)!)) + (1-1/T) log2 T
///        + (L/T) log2(N/L) + (Lbar/T)(psi(N) - 1) log2 e,
/// L = min(N, T-1), Lbar = max(N, T-1).
pub fn highsnr_capacity(rho: f64, n: usize, t: usize) -> f64 {
    assert!(t >= 2 && n >= 1 && rho > 0.0);
    let tf = t as f64;
    let l_lo = n.min(t - 1);
    let l_hi = n.max(t - 1);
    let log2e = 1.0 / LN_2;
    let c = (ln_factorial(l_lo as u32 - 1)
        - ln_factorial(n as u32 - 1)
        - ln_factorial(t as u32 - 1))
        / LN_2
        / tf
        + (1.0 - 1.0 / tf) * tf.log2()
        + (l_lo as f64 / tf) * (n as f64 / l_lo as f64).log2()
        + (l_hi as f64 / tf) * (digamma(n as u32) - 1.0) * log2e;
    (1.0 - 1.0 / tf) * rho.log2() + c
}

/// Union bound on the ML symbol error probability from the minimum
/// pairwise distance:
/// (|C|-1)/2 [1 - (1 + 4(1+rho T)/(d_min rho T)^2)^{-1/2}], clamped to
/// [0, 1].
pub fn union_bound_ser(d_min: f64, size: u64, rho: f64, t: usize) -> f64 {
    assert!(d_min > 0.0 && d_min <= 1.0);
    if size <= 1 {
        return 0.0;
    }
    let rt = rho * t as f64;
    let pep = 0.5 * (1.0 - (1.0 + 4.0 * (1.0 + rt) / (d_min * rt).powi(2)).powf(-0.5));
    ((size - 1) as f64 * pep).clamp(0.0, 1.0)
}
