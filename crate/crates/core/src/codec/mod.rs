//! Symbol decoders and soft bit outputs.
//!
//! The ML decoder scans the whole constellation; the greedy decoder uses
//! the dominant singular direction of the observation, locates the cell
//! from the largest component and quantizes the local coordinates, at cost
//! independent of the constellation size.

mod llr;

pub use llr::{
    approx_llr, approx_llr_on_the_fly, build_neighbor_table, exact_llr, exact_llr_bit,
    msd_cell_stage, msd_coord_stage, write_llr_csv, LlrFrame, LlrStage, NeighborTable, LLR_CLAMP,
};

use crate::cubesplit::{dominant_cell, inverse_map_in_cell, Constellation, LocalCoordinates};
use crate::error::Result;
use crate::grassmann::GrassmannPoint;
use crate::numerics::{
    dominant_left_singular_vector, proj_energy, ComplexMat, SVD_DEFAULT_MAX_ITERS,
    SVD_DEFAULT_TOL,
};

/// Exhaustive maximum-likelihood decoder: argmax ||Y^H c||^2 over the
/// symbol set, ties broken toward the lowest index.
pub fn ml_decode(symbols: &[GrassmannPoint], y: &ComplexMat) -> usize {
    debug_assert!(!symbols.is_empty());
    let mut best = 0usize;
    let mut best_metric = f64::NEG_INFINITY;
    for (i, c) in symbols.iter().enumerate() {
        let m = proj_energy(y, c.coords());
        if m > best_metric {
            best_metric = m;
            best = i;
        }
    }
    best
}

/// Output of the greedy decoder.
#[derive(Debug, Clone)]
pub struct GreedyDecoded {
    /// Flat index of the decoded symbol in the constellation enumeration.
    pub index: usize,
    /// Decoded cell.
    pub cell: usize,
    /// Quantized grid index per coordinate dimension.
    pub grid: Vec<u64>,
    /// Unquantized inverse-map output (coordinate estimates before the
    /// nearest-grid-point decision).
    pub estimate: LocalCoordinates,
}

/// Greedy decoder: dominant singular direction, cell from the largest
/// component (lowest index on ties), coordinates quantized per dimension
/// (exact midpoints resolve to the lower point).
///
/// Degenerate observations propagate [`crate::Error::DegenerateSpectrum`];
/// harnesses count the erasure as a symbol error.
pub fn greedy_decode(c: &Constellation, y: &ComplexMat) -> Result<GreedyDecoded> {
    let u = dominant_left_singular_vector(y, SVD_DEFAULT_TOL, SVD_DEFAULT_MAX_ITERS)?;
    let cell = dominant_cell(&u);
    let estimate = inverse_map_in_cell(c.params(), &u, cell);
    let grid: Vec<u64> = estimate
        .a
        .iter()
        .enumerate()
        .map(|(j, &a)| c.params().quantize_coord(j, a))
        .collect();
    let index = c.index_of(cell, &grid);
    Ok(GreedyDecoded {
        index,
        cell,
        grid,
        estimate,
    })
}
