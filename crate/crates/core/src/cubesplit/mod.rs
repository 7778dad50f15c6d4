//! The cube-split constellation on the Grassmannian of lines.
//!
//! The Grassmannian is partitioned into T Voronoi cells around the canonical
//! basis lines; each cell is parameterized by 2(T-1) local coordinates in
//! (0,1) through a measure-preserving map, and a regular grid in the
//! coordinate cube generates the symbols.  Constellation objects are
//! immutable after construction and all mappings are pure.

mod constellation;
mod label;
mod mindist;

pub use constellation::{label_of, label_to_symbol, Constellation};
pub use label::{allocate_bits, allocate_bits_seeded, gray_decode, gray_encode, BitLabel};
pub use mindist::{conjectured_mindist, cross_cell_mindist_t2, mindist_cs_t1};

use crate::error::{Error, Result};
use crate::grassmann::GrassmannPoint;
use crate::numerics::{inv_norm_cdf, norm_cdf};
use num_complex::Complex64;

/// Hard cap on enumerated constellation size.
pub const ENUMERATION_GUARD: u64 = 1 << 26;

/// Largest admissible coordinate magnitude before the inverse map clamps.
const T_CLAMP: f64 = 1.0 - 1e-15;
/// Local coordinates are clamped into this closed interval.
const A_CLAMP: f64 = 1e-12;
/// Two components within this relative margin tie for the cell index.
const CELL_TIE_REL: f64 = 1e-12;

/// Parameters of a cube-split constellation: block length T and the
/// per-dimension bit widths B_1..B_{2(T-1)}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSplitParams {
    t: usize,
    widths: Vec<u32>,
}

impl CubeSplitParams {
    /// General constructor with explicit per-dimension widths.
    pub fn new(t: usize, widths: Vec<u32>) -> Result<Self> {
        if t < 2 {
            return Err(Error::InvalidParams(format!("block length T must be >= 2, got {t}")));
        }
        if widths.len() != 2 * (t - 1) {
            return Err(Error::InvalidParams(format!(
                "expected {} bit widths for T = {t}, got {}",
                2 * (t - 1),
                widths.len()
            )));
        }
        if widths.iter().any(|&b| b == 0) {
            return Err(Error::InvalidParams("all bit widths must be >= 1".into()));
        }
        if widths.iter().any(|&b| b > 24) {
            return Err(Error::InvalidParams("bit widths above 24 are not supported".into()));
        }
        Ok(Self { t, widths })
    }

    /// Symmetric constellation CS(T, B0) with every width equal to `b0`.
    pub fn symmetric(t: usize, b0: u32) -> Result<Self> {
        let widths = vec![b0; 2 * t.saturating_sub(1)];
        Self::new(t, widths)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn widths(&self) -> &[u32] {
        &self.widths
    }

    /// Number of real local coordinates, 2(T-1).
    pub fn coord_dims(&self) -> usize {
        2 * (self.t - 1)
    }

    /// Number of bits selecting the cell; requires T to be a power of two.
    pub fn cell_bits(&self) -> Result<u32> {
        if !self.t.is_power_of_two() {
            return Err(Error::LabelingUnsupported(self.t));
        }
        Ok(self.t.trailing_zeros())
    }

    /// Total bits per symbol, log2(T) + sum B_j.
    pub fn total_bits(&self) -> Result<u32> {
        Ok(self.cell_bits()? + self.widths.iter().sum::<u32>())
    }

    /// Number of grid points per cell.
    pub fn grid_size(&self) -> u64 {
        self.widths.iter().map(|&b| 1u64 << b).product()
    }

    /// Total constellation size T * prod 2^{B_j}.
    pub fn size(&self) -> u64 {
        self.t as u64 * self.grid_size()
    }

    /// The k-th point of the coordinate set A_j, (2k+1)/2^{B_j+1}.
    pub fn coord_value(&self, j: usize, k: u64) -> f64 {
        debug_assert!(k < (1 << self.widths[j]));
        (2 * k + 1) as f64 / (1u64 << (self.widths[j] + 1)) as f64
    }

    /// Index of the grid point of A_j nearest to `a`; exact midpoints
    /// resolve to the lower point.
    pub fn quantize_coord(&self, j: usize, a: f64) -> u64 {
        let levels = 1u64 << self.widths[j];
        let u = a * levels as f64;
        let f = u.floor();
        let k = if u == f { f as i64 - 1 } else { f as i64 };
        k.clamp(0, levels as i64 - 1) as u64
    }
}

/// Local coordinates of a point inside one cell, together with the
/// intermediate complex quantities of the mapping chain.
#[derive(Debug, Clone)]
pub struct LocalCoordinates {
    /// Cell index in 0..T.
    pub cell: usize,
    /// Real coordinates, length 2(T-1), each strictly inside (0,1).
    pub a: Vec<f64>,
    /// Gaussian-plane intermediates w_j.
    pub w: Vec<Complex64>,
    /// Disc coordinates t_j with |t_j| < 1.
    pub t: Vec<Complex64>,
}

/// Maps a coordinate pair in (0,1)^2 onto the open unit disc:
/// t = sqrt((1 - e^{-|w|^2/2}) / (1 + e^{-|w|^2/2})) w/|w| with
/// w = N^{-1}(a1) + j N^{-1}(a2); the w = 0 singularity is removable and
/// maps to 0.
///
/// Panics outside the open unit square.
pub fn map_xi1(a1: f64, a2: f64) -> Complex64 {
    assert!(a1 > 0.0 && a1 < 1.0 && a2 > 0.0 && a2 < 1.0, "coordinates must lie in (0,1)");
    let w = Complex64::new(inv_norm_cdf(a1).unwrap(), inv_norm_cdf(a2).unwrap());
    let r2 = w.norm_sqr();
    if r2 == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let e = (-0.5 * r2).exp();
    let mag = ((1.0 - e) / (1.0 + e)).sqrt();
    mag * w / w.norm()
}

/// Inverse of [`map_xi1`] on the open disc: recovers (a1, a2) from t.
/// The magnitude is clamped below 1 and the outputs into
/// [1e-12, 1 - 1e-12] so the logarithm stays finite.
pub fn inv_map_xi1(t: Complex64) -> (f64, f64, Complex64) {
    let r = t.norm();
    if r == 0.0 {
        return (0.5, 0.5, Complex64::new(0.0, 0.0));
    }
    let r = r.min(T_CLAMP);
    let r2 = r * r;
    let mag = (2.0 * ((1.0 + r2) / (1.0 - r2)).ln()).sqrt();
    let w = mag * t / t.norm();
    let a1 = norm_cdf(w.re).clamp(A_CLAMP, 1.0 - A_CLAMP);
    let a2 = norm_cdf(w.im).clamp(A_CLAMP, 1.0 - A_CLAMP);
    (a1, a2, w)
}

/// Builds the unit-norm symbol of cell `cell` (0-based) with local
/// coordinates `a`:
/// x = (1 + sum |t_j|^2)^{-1/2} [t_1 .. t_{cell} 1 t_{cell+1} .. t_{T-1}].
pub fn encode(params: &CubeSplitParams, cell: usize, a: &[f64]) -> GrassmannPoint {
    assert!(cell < params.t(), "cell index out of range");
    assert_eq!(a.len(), params.coord_dims());
    let tm1 = params.t() - 1;
    let mut disc = Vec::with_capacity(tm1);
    let mut sum = 1.0;
    for j in 0..tm1 {
        let tj = map_xi1(a[2 * j], a[2 * j + 1]);
        sum += tj.norm_sqr();
        disc.push(tj);
    }
    let scale = 1.0 / sum.sqrt();
    let mut coords = Vec::with_capacity(params.t());
    coords.extend(disc[..cell].iter().map(|&z| z * scale));
    coords.push(Complex64::new(scale, 0.0));
    coords.extend(disc[cell..].iter().map(|&z| z * scale));
    GrassmannPoint::from_unit(coords)
}

/// Recovers local coordinates from an arbitrary unit vector, taking the
/// given cell as the reference component.  Ratios with magnitude at or
/// above 1 are clamped just inside the disc.
pub fn inverse_map_in_cell(
    params: &CubeSplitParams,
    coords: &[Complex64],
    cell: usize,
) -> LocalCoordinates {
    assert_eq!(coords.len(), params.t());
    assert!(cell < params.t());
    let pivot = coords[cell];
    let tm1 = params.t() - 1;
    let mut a = Vec::with_capacity(2 * tm1);
    let mut w = Vec::with_capacity(tm1);
    let mut t = Vec::with_capacity(tm1);
    for (k, &x) in coords.iter().enumerate() {
        if k == cell {
            continue;
        }
        let ratio = if pivot.norm() > 0.0 {
            x / pivot
        } else {
            Complex64::new(0.0, 0.0)
        };
        let ratio = if ratio.norm() > T_CLAMP {
            ratio * (T_CLAMP / ratio.norm())
        } else {
            ratio
        };
        let (a1, a2, wj) = inv_map_xi1(ratio);
        a.push(a1);
        a.push(a2);
        w.push(wj);
        t.push(ratio);
    }
    LocalCoordinates { cell, a, w, t }
}

/// Full inverse mapping: locates the cell from the strictly largest
/// component, then inverts the coordinate chain.  Errors with
/// [`Error::CellBoundary`] when the two largest moduli tie within 1e-12
/// relative (decoders break this tie toward the lowest index instead).
pub fn inverse_map(params: &CubeSplitParams, x: &GrassmannPoint) -> Result<LocalCoordinates> {
    let coords = x.coords();
    let mut best = 0usize;
    let mut best_mag = -1.0f64;
    let mut second = -1.0f64;
    for (k, z) in coords.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            second = best_mag;
            best_mag = m;
            best = k;
        } else if m > second {
            second = m;
        }
    }
    if best_mag - second <= CELL_TIE_REL * best_mag {
        return Err(Error::CellBoundary(CELL_TIE_REL));
    }
    Ok(inverse_map_in_cell(params, coords, best))
}

/// Cell index with the documented lowest-index tie rule, as used by the
/// greedy decoder.
pub fn dominant_cell(coords: &[Complex64]) -> usize {
    let mut best = 0usize;
    let mut best_mag = coords[0].norm();
    for (k, z) in coords.iter().enumerate().skip(1) {
        let m = z.norm();
        if m > best_mag {
            best_mag = m;
            best = k;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::chordal_distance;
    use crate::rng;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn params_validation() {
        assert!(CubeSplitParams::symmetric(2, 1).is_ok());
        assert!(CubeSplitParams::symmetric(1, 1).is_err());
        assert!(CubeSplitParams::new(2, vec![1]).is_err());
        assert!(CubeSplitParams::new(2, vec![0, 1]).is_err());
        let p = CubeSplitParams::symmetric(4, 2).unwrap();
        assert_eq!(p.size(), 4 * (1 << 12));
        assert_eq!(p.total_bits().unwrap(), 14);
        assert!(CubeSplitParams::new(3, vec![1; 4]).unwrap().cell_bits().is_err());
    }

    #[test]
    fn coordinate_sets_sit_inside_unit_interval() {
        let p = CubeSplitParams::symmetric(2, 3).unwrap();
        for k in 0..8 {
            let v = p.coord_value(0, k);
            assert!(v > 0.0 && v < 1.0);
        }
        assert_abs_diff_eq!(p.coord_value(0, 0), 1.0 / 16.0, epsilon = 0.0);
        assert_abs_diff_eq!(p.coord_value(0, 7), 15.0 / 16.0, epsilon = 0.0);
    }

    #[test]
    fn quantize_nearest_with_lower_tie() {
        let p = CubeSplitParams::symmetric(2, 1).unwrap(); // A = {1/4, 3/4}
        assert_eq!(p.quantize_coord(0, 0.3), 0);
        assert_eq!(p.quantize_coord(0, 0.7), 1);
        // exact midpoint 0.5 resolves to the lower point
        assert_eq!(p.quantize_coord(0, 0.5), 0);
        assert_eq!(p.quantize_coord(0, 1.0 - 1e-12), 1);
        assert_eq!(p.quantize_coord(0, 1e-12), 0);
    }

    #[test]
    fn xi1_center_maps_to_zero() {
        assert_eq!(map_xi1(0.5, 0.5), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn xi1_real_axis_value() {
        // w = (m, 0) with m = N^{-1}(0.75): |t| = sqrt((1-e^{-m^2/2})/(1+e^{-m^2/2}))
        let m = inv_norm_cdf(0.75).unwrap();
        let e = (-0.5 * m * m).exp();
        let want = ((1.0 - e) / (1.0 + e)).sqrt();
        let t = map_xi1(0.75, 0.5);
        assert_abs_diff_eq!(t.im, 0.0, epsilon = 1e-15);
        assert!(t.re > 0.0);
        assert_relative_eq!(t.re, want, max_relative = 1e-12);
    }

    #[test]
    fn xi1_antisymmetry_in_first_coordinate() {
        let t1 = map_xi1(0.3, 0.6);
        let t2 = map_xi1(0.7, 0.6);
        assert_abs_diff_eq!(t1.re, -t2.re, epsilon = 1e-12);
        assert_abs_diff_eq!(t1.im, t2.im, epsilon = 1e-12);
    }

    #[test]
    fn encode_center_gives_basis_vector() {
        let p = CubeSplitParams::symmetric(4, 1).unwrap();
        for cell in 0..4 {
            let x = encode(&p, cell, &[0.5; 6]);
            let e = GrassmannPoint::basis(4, cell);
            assert_abs_diff_eq!(chordal_distance(&x, &e), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn encode_t2_quarter_coordinates() {
        // a = (3/4, 3/4): t = sqrt(c) e^{j pi/4} with c = (1-e^{-m^2})/(1+e^{-m^2})
        let p = CubeSplitParams::symmetric(2, 1).unwrap();
        let m = inv_norm_cdf(0.75).unwrap();
        let c = (1.0 - (-m * m).exp()) / (1.0 + (-m * m).exp());
        assert_relative_eq!(c, 0.2236, max_relative = 1e-3);
        let x = encode(&p, 0, &[0.75, 0.75]);
        let scale = 1.0 / (1.0 + c).sqrt();
        assert_relative_eq!(x.coords()[0].re, scale, max_relative = 1e-12);
        let t = x.coords()[1] / x.coords()[0];
        assert_relative_eq!(t.norm(), c.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(t.arg(), std::f64::consts::FRAC_PI_4, max_relative = 1e-12);
    }

    #[test]
    fn encoded_pivot_is_strictly_largest_and_real_positive() {
        let p = CubeSplitParams::symmetric(4, 2).unwrap();
        let mut rng = rng::base_rng(5);
        for _ in 0..50 {
            let cell = (rng::open_unit(&mut rng) * 4.0) as usize % 4;
            let a: Vec<f64> = (0..6).map(|_| rng::open_unit(&mut rng)).collect();
            let x = encode(&p, cell, &a);
            let pivot = x.coords()[cell];
            assert!(pivot.im.abs() < 1e-15 && pivot.re > 0.0);
            for (k, z) in x.coords().iter().enumerate() {
                if k != cell {
                    assert!(z.norm() < pivot.norm());
                }
            }
        }
    }

    #[test]
    fn inverse_of_basis_vector_is_center() {
        let p = CubeSplitParams::symmetric(2, 1).unwrap();
        let lc = inverse_map(&p, &GrassmannPoint::basis(2, 0)).unwrap();
        assert_eq!(lc.cell, 0);
        assert_abs_diff_eq!(lc.a[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(lc.a[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn round_trip_on_random_interior_points() {
        let p = CubeSplitParams::symmetric(4, 3).unwrap();
        let mut rng = rng::base_rng(11);
        for trial in 0..100 {
            let cell = trial % 4;
            let a: Vec<f64> = (0..6).map(|_| 0.05 + 0.9 * rng::open_unit(&mut rng)).collect();
            let x = encode(&p, cell, &a);
            let lc = inverse_map(&p, &x).unwrap();
            assert_eq!(lc.cell, cell);
            for (got, want) in lc.a.iter().zip(&a) {
                assert_abs_diff_eq!(got, want, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn round_trip_under_phase_rotation() {
        // encode then inverse must agree up to the global phase
        let p = CubeSplitParams::symmetric(2, 2).unwrap();
        let a = [0.62, 0.31];
        let x = encode(&p, 1, &a);
        let rot = Complex64::from_polar(1.0, 1.234);
        let y: Vec<Complex64> = x.coords().iter().map(|z| z * rot).collect();
        let lc = inverse_map_in_cell(&p, &y, 1);
        assert_abs_diff_eq!(lc.a[0], a[0], epsilon = 1e-10);
        assert_abs_diff_eq!(lc.a[1], a[1], epsilon = 1e-10);
    }

    #[test]
    fn near_boundary_magnitude_clamps_without_overflow() {
        let p = CubeSplitParams::symmetric(2, 1).unwrap();
        let r: f64 = 1.0 - 1e-16; // beyond the clamp threshold
        let coords = vec![
            Complex64::new(1.0 / (1.0 + r * r).sqrt(), 0.0),
            Complex64::new(r / (1.0 + r * r).sqrt(), 0.0),
        ];
        let lc = inverse_map_in_cell(&p, &coords, 0);
        assert!(lc.a[0].is_finite());
        assert!(lc.a[0] >= 1e-12 && lc.a[0] <= 1.0 - 1e-12);
        // the clamp must have engaged: t magnitude capped below 1
        assert!(lc.t[0].norm() <= 1.0 - 1e-16);
        assert!(lc.w[0].norm().is_finite());
    }

    #[test]
    fn boundary_tie_is_an_error() {
        let p = CubeSplitParams::symmetric(2, 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = GrassmannPoint::new(vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)]).unwrap();
        match inverse_map(&p, &x) {
            Err(Error::CellBoundary(_)) => {}
            other => panic!("expected boundary error, got {other:?}"),
        }
    }

    #[test]
    fn disc_statistic_has_f22_law_small_sample() {
        // |t|^2 with uniform coordinates follows CDF 2x/(1+x) on (0,1);
        // quick KS check at n = 20_000 (the acceptance suite runs 1e5)
        let mut rng = rng::base_rng(2024);
        let n = 20_000;
        let mut samples: Vec<f64> = (0..n)
            .map(|_| {
                let t = map_xi1(rng::open_unit(&mut rng), rng::open_unit(&mut rng));
                t.norm_sqr()
            })
            .collect();
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d_stat: f64 = 0.0;
        for (i, &x) in samples.iter().enumerate() {
            let f = 2.0 * x / (1.0 + x);
            let hi = (i + 1) as f64 / n as f64;
            let lo = i as f64 / n as f64;
            d_stat = d_stat.max((f - hi).abs()).max((f - lo).abs());
        }
        let crit = 1.6276 / (n as f64).sqrt(); // alpha = 0.01
        assert!(d_stat < crit, "KS statistic {d_stat} above {crit}");
    }
}
