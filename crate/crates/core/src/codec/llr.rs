//! Exact and approximate bit-LLR computation, the precomputed
//! nearest-neighbor table, and the two-stage (cell bits first, coordinate
//! bits second) demapper.
//!
//! All log-sum-exp evaluations subtract the global metric maximum before
//! exponentiation and the final LLRs are clamped to +-80 natural-log units.

use super::greedy_decode;
use crate::cubesplit::Constellation;
use crate::error::{Error, Result};
use crate::numerics::{proj_energy, ComplexMat};
use rayon::prelude::*;
use std::io::Write;

/// LLR magnitude cap; beyond this the bit probabilities are sub-denormal.
pub const LLR_CLAMP: f64 = 80.0;

/// Exact-LLR constellation size guard.
const EXACT_GUARD: usize = 1 << 20;

/// Which demapping stage produced a frame of LLRs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlrStage {
    /// All B bits from the full constellation sums.
    Full,
    /// Cell bits only.
    CellStage,
    /// Coordinate bits only, conditioned on a decoded cell.
    CoordStage,
}

/// Per-bit log-likelihood ratios (natural log, positive favors bit 1).
#[derive(Debug, Clone)]
pub struct LlrFrame {
    pub values: Vec<f64>,
    pub stage: LlrStage,
}

fn clamp(v: f64) -> f64 {
    v.clamp(-LLR_CLAMP, LLR_CLAMP)
}

/// Decision metric weights exp(rho T/(1 + rho T) ||Y^H c||^2) for all
/// symbols, returned as exponents.
fn metrics(c: &Constellation, y: &ComplexMat, rho: f64) -> Vec<f64> {
    let t = c.params().t() as f64;
    let coef = rho * t / (1.0 + rho * t);
    c.symbols()
        .iter()
        .map(|s| coef * proj_energy(y, s.coords()))
        .collect()
}

fn llr_from_sums(s1: f64, s0: f64) -> f64 {
    // both sums share the subtracted maximum, which cancels in the ratio
    if s1 == 0.0 && s0 == 0.0 {
        return 0.0;
    }
    if s1 == 0.0 {
        return -LLR_CLAMP;
    }
    if s0 == 0.0 {
        return LLR_CLAMP;
    }
    clamp(s1.ln() - s0.ln())
}

/// Exact per-bit LLRs from full-constellation sums.
pub fn exact_llr(c: &Constellation, y: &ComplexMat, rho: f64) -> Result<LlrFrame> {
    if c.size() > EXACT_GUARD {
        return Err(Error::GuardExceeded(format!(
            "exact LLR over {} symbols exceeds the 2^20 guard",
            c.size()
        )));
    }
    let labels = c.labels()?;
    let bits = c.bits_per_symbol()? as usize;
    let m = metrics(c, y, rho);
    let mmax = m.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut s = vec![[0.0f64; 2]; bits];
    for (i, &mi) in m.iter().enumerate() {
        let e = (mi - mmax).exp();
        let label = &labels[i];
        for (j, sj) in s.iter_mut().enumerate() {
            sj[label.bit(j as u32) as usize] += e;
        }
    }
    let values = s.iter().map(|sj| llr_from_sums(sj[1], sj[0])).collect();
    Ok(LlrFrame {
        values,
        stage: LlrStage::Full,
    })
}

/// Exact LLR of a single bit position (cheaper when only one is needed).
pub fn exact_llr_bit(c: &Constellation, y: &ComplexMat, rho: f64, bit: u32) -> Result<f64> {
    let labels = c.labels()?;
    let m = metrics(c, y, rho);
    let mmax = m.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut s = [0.0f64; 2];
    for (i, &mi) in m.iter().enumerate() {
        s[labels[i].bit(bit) as usize] += (mi - mmax).exp();
    }
    Ok(llr_from_sums(s[1], s[0]))
}

/// Precomputed eta-nearest neighbor sets per (symbol, bit, bit value).
#[derive(Debug, Clone)]
pub struct NeighborTable {
    eta: usize,
    bits: usize,
    /// Layout: [symbol][bit][value][rank].
    lists: Vec<u32>,
}

impl NeighborTable {
    pub fn eta(&self) -> usize {
        self.eta
    }

    /// The eta symbol indices nearest to `symbol` with bit `bit` equal to
    /// `value`, closest first.
    pub fn neighbors(&self, symbol: usize, bit: u32, value: u8) -> &[u32] {
        let base = ((symbol * self.bits + bit as usize) * 2 + value as usize) * self.eta;
        &self.lists[base..base + self.eta]
    }
}

/// Builds the neighbor table by exact chordal-distance sorting, ties broken
/// toward the lower symbol index.
pub fn build_neighbor_table(c: &Constellation, eta: usize) -> Result<NeighborTable> {
    if c.size() > EXACT_GUARD {
        return Err(Error::GuardExceeded(format!(
            "neighbor table over {} symbols exceeds the 2^20 guard",
            c.size()
        )));
    }
    let labels = c.labels()?;
    let bits = c.bits_per_symbol()? as usize;
    let n = c.size();
    // eta cannot exceed the smallest bit-class size
    for j in 0..bits {
        let ones = labels.iter().filter(|l| l.bit(j as u32) == 1).count();
        let smallest = ones.min(n - ones);
        if eta > smallest {
            return Err(Error::InvalidParams(format!(
                "eta = {eta} exceeds the size {smallest} of a bit-{j} class"
            )));
        }
    }

    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut order: Vec<(f64, u32)> = (0..n)
                .map(|i| {
                    (
                        crate::grassmann::chordal_distance(c.symbol(s), c.symbol(i)),
                        i as u32,
                    )
                })
                .collect();
            order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let mut row = Vec::with_capacity(bits * 2 * eta);
            for j in 0..bits {
                for value in 0..2u8 {
                    let mut count = 0;
                    for &(_, i) in &order {
                        if labels[i as usize].bit(j as u32) == value {
                            row.push(i);
                            count += 1;
                            if count == eta {
                                break;
                            }
                        }
                    }
                }
            }
            row
        })
        .collect();

    let mut lists = Vec::with_capacity(n * bits * 2 * eta);
    for row in rows {
        lists.extend(row);
    }
    Ok(NeighborTable { eta, bits, lists })
}

fn llr_over_sets(
    c: &Constellation,
    y: &ComplexMat,
    rho: f64,
    sets: &[(Vec<u32>, Vec<u32>)],
    stage: LlrStage,
) -> LlrFrame {
    let t = c.params().t() as f64;
    let coef = rho * t / (1.0 + rho * t);
    // metrics only for the symbols the sets actually touch
    let mut cache = vec![f64::NAN; c.size()];
    let mut metric = |i: u32, cache: &mut Vec<f64>| -> f64 {
        let i = i as usize;
        if cache[i].is_nan() {
            cache[i] = coef * proj_energy(y, c.symbol(i).coords());
        }
        cache[i]
    };
    let mut mmax = f64::NEG_INFINITY;
    for (ones, zeros) in sets {
        for &i in ones.iter().chain(zeros) {
            mmax = mmax.max(metric(i, &mut cache));
        }
    }
    let values = sets
        .iter()
        .map(|(ones, zeros)| {
            let s1: f64 = ones.iter().map(|&i| (cache[i as usize] - mmax).exp()).sum();
            let s0: f64 = zeros.iter().map(|&i| (cache[i as usize] - mmax).exp()).sum();
            llr_from_sums(s1, s0)
        })
        .collect();
    LlrFrame { values, stage }
}

/// Approximate LLRs from the greedy decoder's neighborhood: the sums of
/// the exact LLR are restricted to the eta nearest symbols of each bit
/// class around the decoded symbol.
pub fn approx_llr(
    c: &Constellation,
    table: &NeighborTable,
    y: &ComplexMat,
    rho: f64,
    eta: usize,
) -> Result<LlrFrame> {
    if eta == 0 || eta > table.eta() {
        return Err(Error::InvalidParams(format!(
            "eta = {eta} outside the table's range 1..={}",
            table.eta()
        )));
    }
    let bits = c.bits_per_symbol()? as usize;
    let hat = greedy_decode(c, y)?.index;
    let sets: Vec<(Vec<u32>, Vec<u32>)> = (0..bits)
        .map(|j| {
            (
                table.neighbors(hat, j as u32, 1)[..eta].to_vec(),
                table.neighbors(hat, j as u32, 0)[..eta].to_vec(),
            )
        })
        .collect();
    Ok(llr_over_sets(c, y, rho, &sets, LlrStage::Full))
}

/// Approximate LLRs without a precomputed table: candidates are the whole
/// decoded cell plus the center image of every other cell.  Intended for
/// constellations too large to tabulate; class lists shorter than eta are
/// used as-is.
pub fn approx_llr_on_the_fly(
    c: &Constellation,
    y: &ComplexMat,
    rho: f64,
    eta: usize,
) -> Result<LlrFrame> {
    if eta == 0 {
        return Err(Error::InvalidParams("eta must be positive".into()));
    }
    let labels = c.labels()?;
    let bits = c.bits_per_symbol()? as usize;
    let params = c.params();
    let decoded = greedy_decode(c, y)?;
    let hat = decoded.index;

    let grid = params.grid_size() as usize;
    let mut candidates: Vec<u32> = (0..grid)
        .map(|g| (decoded.cell * grid + g) as u32)
        .collect();
    let center: Vec<u64> = (0..params.coord_dims())
        .map(|j| params.quantize_coord(j, 0.5))
        .collect();
    for cell in 0..params.t() {
        if cell != decoded.cell {
            candidates.push(c.index_of(cell, &center) as u32);
        }
    }
    let mut by_dist: Vec<(f64, u32)> = candidates
        .into_iter()
        .map(|i| {
            (
                crate::grassmann::chordal_distance(c.symbol(hat as usize), c.symbol(i as usize)),
                i,
            )
        })
        .collect();
    by_dist.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let sets: Vec<(Vec<u32>, Vec<u32>)> = (0..bits)
        .map(|j| {
            let pick = |value: u8| -> Vec<u32> {
                by_dist
                    .iter()
                    .filter(|(_, i)| labels[*i as usize].bit(j as u32) == value)
                    .take(eta)
                    .map(|&(_, i)| i)
                    .collect()
            };
            (pick(1), pick(0))
        })
        .collect();
    Ok(llr_over_sets(c, y, rho, &sets, LlrStage::Full))
}

/// First demapping stage: LLRs of the cell bits from full-constellation
/// sums.
pub fn msd_cell_stage(c: &Constellation, y: &ComplexMat, rho: f64) -> Result<LlrFrame> {
    let labels = c.labels()?;
    let cell_bits = c.params().cell_bits()? as usize;
    let m = metrics(c, y, rho);
    let mmax = m.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut s = vec![[0.0f64; 2]; cell_bits];
    for (i, &mi) in m.iter().enumerate() {
        let e = (mi - mmax).exp();
        for (j, sj) in s.iter_mut().enumerate() {
            sj[labels[i].bit(j as u32) as usize] += e;
        }
    }
    Ok(LlrFrame {
        values: s.iter().map(|sj| llr_from_sums(sj[1], sj[0])).collect(),
        stage: LlrStage::CellStage,
    })
}

/// Second demapping stage: coordinate-bit LLRs with the sums restricted to
/// the symbols of cell `cell_hat`.
pub fn msd_coord_stage(
    c: &Constellation,
    y: &ComplexMat,
    rho: f64,
    cell_hat: usize,
) -> Result<LlrFrame> {
    if cell_hat >= c.params().t() {
        return Err(Error::InvalidParams(format!("cell index {cell_hat} out of range")));
    }
    let labels = c.labels()?;
    let cell_bits = c.params().cell_bits()? as usize;
    let bits = c.bits_per_symbol()? as usize;
    let coord_bits = bits - cell_bits;
    let grid = c.params().grid_size() as usize;
    let t = c.params().t() as f64;
    let coef = rho * t / (1.0 + rho * t);

    let idx: Vec<usize> = (0..grid).map(|g| cell_hat * grid + g).collect();
    let m: Vec<f64> = idx
        .iter()
        .map(|&i| coef * proj_energy(y, c.symbol(i).coords()))
        .collect();
    let mmax = m.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut s = vec![[0.0f64; 2]; coord_bits];
    for (&i, &mi) in idx.iter().zip(&m) {
        let e = (mi - mmax).exp();
        for (j, sj) in s.iter_mut().enumerate() {
            sj[labels[i].bit((cell_bits + j) as u32) as usize] += e;
        }
    }
    Ok(LlrFrame {
        values: s.iter().map(|sj| llr_from_sums(sj[1], sj[0])).collect(),
        stage: LlrStage::CoordStage,
    })
}

/// LLR dump: one CSV row (frame id, bit index, llr) per value.
pub fn write_llr_csv<W: Write>(w: &mut W, frames: &[LlrFrame]) -> Result<()> {
    writeln!(w, "frame,bit,llr")?;
    for (f, frame) in frames.iter().enumerate() {
        for (j, v) in frame.values.iter().enumerate() {
            writeln!(w, "{f},{j},{}", crate::grassmann::fmt_f64(*v))?;
        }
    }
    Ok(())
}
