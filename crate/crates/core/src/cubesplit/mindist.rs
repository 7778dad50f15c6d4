//! Closed-form minimum distances of the symmetric constellation CS(T, B0).
//!
//! The minimizing pair sits in one cell with coordinates differing in a
//! single component across the two middle grid points; for B0 = 1 this is
//! provably the minimum, for larger B0 it is the (numerically verified)
//! conjectured minimum.

use crate::numerics::inv_norm_cdf;
use num_complex::Complex64;

/// Minimum distance of CS(T, 1):
/// d = sqrt(1 - |1 - (1+j)/(c^{-1} + T - 1)|^2) with
/// c = (1 - e^{-m^2})/(1 + e^{-m^2}), m = N^{-1}(3/4).
pub fn mindist_cs_t1(t: usize) -> f64 {
    assert!(t >= 2);
    let m = inv_norm_cdf(0.75).unwrap();
    let e = (-m * m).exp();
    let c = (1.0 - e) / (1.0 + e);
    let z = Complex64::new(1.0, 0.0)
        - Complex64::new(1.0, 1.0) / Complex64::new(1.0 / c + (t - 1) as f64, 0.0);
    (1.0 - z.norm_sqr()).max(0.0).sqrt()
}

/// Conjectured minimum distance of CS(T, B0), i.e. the distance of the
/// closest same-cell pair (coordinates differing in one component across
/// the two middle grid points):
/// d = sqrt(1 - |1 + alpha/(alpha+beta) (e^{j 2 phi} - 1)|^2) with
/// m0 = N^{-1}(2^{-B0-1}), m1 = N^{-1}(1/2 + 2^{-B0-1}),
/// alpha = tanh-like ratio of (m0^2+m1^2)/2, beta = 1 + (T-2) times the
/// same ratio of m0^2, phi = arctan(m1/m0).
///
/// Beware: for T = 2 with B0 >= 3 the adjacent-cell corner pair of
/// [`cross_cell_mindist_t2`] is closer, so the exhaustive minimum of the
/// enumerated constellation is the smaller of the two values.
pub fn conjectured_mindist(t: usize, b0: u32) -> f64 {
    assert!(t >= 2 && b0 >= 1);
    let p0 = (0.5f64).powi(b0 as i32 + 1);
    let m0 = inv_norm_cdf(p0).unwrap();
    let m1 = inv_norm_cdf(0.5 + p0).unwrap();
    let ea = (-0.5 * (m0 * m0 + m1 * m1)).exp();
    let alpha = (1.0 - ea) / (1.0 + ea);
    let eb = (-m0 * m0).exp();
    let beta = 1.0 + (t as f64 - 2.0) * (1.0 - eb) / (1.0 + eb);
    let phi = (m1 / m0).atan();
    let rot = Complex64::from_polar(1.0, 2.0 * phi) - Complex64::new(1.0, 0.0);
    let z = Complex64::new(1.0, 0.0) + alpha / (alpha + beta) * rot;
    (1.0 - z.norm_sqr()).max(0.0).sqrt()
}

/// Distance of the closest adjacent-cell pair of CS(2, B0): the corner
/// symbols g_1((a, a)) and g_2((a, 1-a)) with a = 2^{-B0-1} satisfy
/// t' = conj(t), giving d = (1 - |t|^2)/(1 + |t|^2) = exp(-m0^2).
pub fn cross_cell_mindist_t2(b0: u32) -> f64 {
    assert!(b0 >= 1);
    let m0 = inv_norm_cdf((0.5f64).powi(b0 as i32 + 1)).unwrap();
    (-m0 * m0).exp()
}
