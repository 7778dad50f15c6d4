//! Geometry of the Grassmannian of lines G(C^T, 1): points, chordal
//! distance, packing bounds, distance spectra and a gradient-descent
//! packer.
//!
//! A point is a one-dimensional subspace of C^T represented by a unit-norm
//! vector; two representatives that differ by a unit-modulus scalar denote
//! the same point.

mod pack;

pub use pack::{riemannian_pack, PackConfig, PackReport};

use crate::error::{Error, Result};
use crate::numerics::{inner, normalize, ComplexVec};
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::{BufRead, Write};

/// A line in C^T represented by a unit-norm coordinate vector.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannPoint {
    coords: ComplexVec,
}

impl GrassmannPoint {
    /// Normalizes `coords` and wraps it; errors on (near-)zero input.
    /// Vectors already unit norm to 1e-12 are kept bit-identical.
    pub fn new(mut coords: ComplexVec) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Dimension(
                "a Grassmann point needs at least 2 coordinates".into(),
            ));
        }
        let n = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-150 {
            return Err(Error::Domain(
                "cannot normalize a zero vector onto the Grassmannian".into(),
            ));
        }
        if (n - 1.0).abs() > 1e-12 {
            normalize(&mut coords);
        }
        Ok(Self { coords })
    }

    /// Wraps a vector that is already unit norm (debug-checked).
    pub fn from_unit(coords: ComplexVec) -> Self {
        debug_assert!(
            (coords.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-9,
            "from_unit expects a unit-norm vector"
        );
        Self { coords }
    }

    /// Canonical basis vector e_i as a Grassmann point.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[i] = Complex64::new(1.0, 0.0);
        Self { coords: v }
    }

    /// Ambient dimension T.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Unit-norm coordinate vector.
    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }
}

/// Chordal distance d(x, y) = sqrt(1 - |x^H y|^2), in [0, 1].
///
/// Symmetric, zero exactly on equal lines, and invariant to unit-modulus
/// scaling of either argument.
pub fn chordal_distance(x: &GrassmannPoint, y: &GrassmannPoint) -> f64 {
    debug_assert_eq!(x.dim(), y.dim());
    let c = inner(x.coords(), y.coords()).norm_sqr();
    (1.0 - c).max(0.0).sqrt()
}

/// Per-symbol nearest-neighbor distances of a constellation.
#[derive(Debug, Clone)]
pub struct DistanceSpectrum {
    /// Distance from each symbol to its nearest neighbor.
    pub nearest: Vec<f64>,
    /// Global minimum pairwise distance.
    pub min_distance: f64,
    /// Indices of a pair achieving the minimum.
    pub min_pair: (usize, usize),
}

/// Exhaustive O(n^2) pairwise scan.
pub fn distance_spectrum(points: &[GrassmannPoint]) -> Result<DistanceSpectrum> {
    if points.len() < 2 {
        return Err(Error::InvalidParams(
            "distance spectrum needs at least 2 points".into(),
        ));
    }
    let n = points.len();
    // Row sweep per symbol parallelizes cleanly and keeps the result exact.
    let nearest: Vec<(f64, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = f64::INFINITY;
            let mut who = usize::MAX;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = chordal_distance(&points[i], &points[j]);
                if d < best {
                    best = d;
                    who = j;
                }
            }
            (best, who)
        })
        .collect();
    let mut min_distance = f64::INFINITY;
    let mut min_pair = (0, 0);
    for (i, &(d, j)) in nearest.iter().enumerate() {
        if d < min_distance {
            min_distance = d;
            min_pair = (i.min(j), i.max(j));
        }
    }
    Ok(DistanceSpectrum {
        nearest: nearest.into_iter().map(|(d, _)| d).collect(),
        min_distance,
        min_pair,
    })
}

/// Minimum pairwise distance only (same scan, no per-symbol vector).
pub fn min_distance(points: &[GrassmannPoint]) -> Result<f64> {
    Ok(distance_spectrum(points)?.min_distance)
}

/// Gilbert–Varshamov / Hamming bounds on the minimum distance of an optimal
/// size-`size` packing in G(C^T, 1):
/// lower = size^{-1/(2(T-1))}, upper = min(1, 2 size^{-1/(2(T-1))}).
pub fn packing_bounds(t: usize, size: u64) -> (f64, f64) {
    assert!(t >= 2, "packing bounds need T >= 2");
    assert!(size >= 1);
    let e = -1.0 / (2.0 * (t as f64 - 1.0));
    let lower = (size as f64).powf(e);
    let upper = (2.0 * lower).min(1.0);
    (lower, upper)
}

/// Formats a float with 17 significant digits so it round-trips exactly.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes one row per symbol with columns re_0, im_0, ..., re_{T-1}, im_{T-1}.
pub fn write_symbols_csv<W: Write>(w: &mut W, points: &[GrassmannPoint]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidParams("no symbols to write".into()));
    }
    let t = points[0].dim();
    let header: Vec<String> = (0..t).flat_map(|k| [format!("re_{k}"), format!("im_{k}")]).collect();
    writeln!(w, "{}", header.join(","))?;
    for p in points {
        let row: Vec<String> = p
            .coords()
            .iter()
            .flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)])
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Reads a symbol CSV produced by [`write_symbols_csv`] (or the labeled
/// variant; a leading `label` column is skipped).  Lines starting with `#`
/// are treated as comments.
pub fn read_symbols_csv<R: BufRead>(r: R) -> Result<Vec<GrassmannPoint>> {
    let mut points = Vec::new();
    let mut coord_start = 0usize;
    let mut saw_header = false;
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if !saw_header {
            saw_header = true;
            coord_start = fields.iter().position(|f| *f == "re_0").ok_or_else(|| {
                Error::CsvParse("header row must contain a re_0 column".into())
            })?;
            continue;
        }
        let coords: Vec<&str> = fields[coord_start..].to_vec();
        if coords.len() < 4 || coords.len() % 2 != 0 {
            return Err(Error::CsvParse(format!(
                "symbol row has {} coordinate fields",
                coords.len()
            )));
        }
        let mut v = Vec::with_capacity(coords.len() / 2);
        for pair in coords.chunks(2) {
            let re: f64 = pair[0]
                .trim()
                .parse()
                .map_err(|e| Error::CsvParse(format!("bad float {:?}: {e}", pair[0])))?;
            let im: f64 = pair[1]
                .trim()
                .parse()
                .map_err(|e| Error::CsvParse(format!("bad float {:?}: {e}", pair[1])))?;
            v.push(Complex64::new(re, im));
        }
        points.push(GrassmannPoint::new(v)?);
    }
    if points.is_empty() {
        return Err(Error::CsvParse("no symbol rows found".into()));
    }
    Ok(points)
}
