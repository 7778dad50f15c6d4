//! Enumerated cube-split constellations with their binary labels.

use super::label::{gray_decode, gray_encode, BitLabel};
use super::{encode, CubeSplitParams, ENUMERATION_GUARD};
use crate::error::{Error, Result};
use crate::grassmann::{fmt_f64, GrassmannPoint};
use std::io::Write;

/// An immutable, fully enumerated cube-split constellation.
///
/// Symbols are ordered cell-major, then mixed-radix over the grid indices
/// (dimension 0 slowest).  Labels exist whenever T is a power of two.
#[derive(Debug, Clone)]
pub struct Constellation {
    params: CubeSplitParams,
    strides: Vec<u64>,
    symbols: Vec<GrassmannPoint>,
    labels: Option<Vec<BitLabel>>,
}

impl Constellation {
    /// Enumerates all T * prod 2^{B_j} symbols.
    pub fn build(params: CubeSplitParams) -> Result<Self> {
        let size = params.size();
        if size > ENUMERATION_GUARD {
            return Err(Error::GuardExceeded(format!(
                "constellation size {size} exceeds the enumeration cap {ENUMERATION_GUARD}"
            )));
        }
        let dims = params.coord_dims();
        let mut strides = vec![1u64; dims];
        for j in (0..dims.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] << params.widths()[j + 1];
        }
        let grid = params.grid_size();
        let labeled = params.t().is_power_of_two();

        let mut symbols = Vec::with_capacity(size as usize);
        let mut labels = if labeled { Some(Vec::with_capacity(size as usize)) } else { None };
        let mut ks = vec![0u64; dims];
        let mut a = vec![0.0f64; dims];
        for cell in 0..params.t() {
            for g in 0..grid {
                decode_grid(&strides, &params, g, &mut ks);
                for j in 0..dims {
                    a[j] = params.coord_value(j, ks[j]);
                }
                symbols.push(encode(&params, cell, &a));
                if let Some(ls) = labels.as_mut() {
                    ls.push(make_label(&params, cell, &ks)?);
                }
            }
        }
        Ok(Self {
            params,
            strides,
            symbols,
            labels,
        })
    }

    /// Convenience constructor for the symmetric constellation CS(T, B0).
    pub fn symmetric(t: usize, b0: u32) -> Result<Self> {
        Self::build(CubeSplitParams::symmetric(t, b0)?)
    }

    pub fn params(&self) -> &CubeSplitParams {
        &self.params
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[GrassmannPoint] {
        &self.symbols
    }

    pub fn symbol(&self, idx: usize) -> &GrassmannPoint {
        &self.symbols[idx]
    }

    /// Bits per symbol; errors when T is not a power of two.
    pub fn bits_per_symbol(&self) -> Result<u32> {
        self.params.total_bits()
    }

    /// All labels, aligned with [`Self::symbols`].
    pub fn labels(&self) -> Result<&[BitLabel]> {
        self.labels
            .as_deref()
            .ok_or(Error::LabelingUnsupported(self.params.t()))
    }

    pub fn label(&self, idx: usize) -> Result<&BitLabel> {
        Ok(&self.labels()?[idx])
    }

    /// Flat index of the symbol with the given cell and grid indices.
    pub fn index_of(&self, cell: usize, ks: &[u64]) -> usize {
        debug_assert_eq!(ks.len(), self.params.coord_dims());
        let grid: u64 = ks.iter().zip(&self.strides).map(|(k, s)| k * s).sum();
        cell * self.params.grid_size() as usize + grid as usize
    }

    /// Cell index of a flat symbol index.
    pub fn cell_of(&self, idx: usize) -> usize {
        idx / self.params.grid_size() as usize
    }

    /// Grid indices of a flat symbol index.
    pub fn grid_of(&self, idx: usize) -> Vec<u64> {
        let mut ks = vec![0u64; self.params.coord_dims()];
        let g = (idx as u64) % self.params.grid_size();
        decode_grid(&self.strides, &self.params, g, &mut ks);
        ks
    }

    /// Index of the symbol carrying this label.
    pub fn label_to_index(&self, label: &BitLabel) -> Result<usize> {
        let (cell, ks) = split_label(&self.params, label)?;
        Ok(self.index_of(cell, &ks))
    }

    /// Writes the labeled symbol dump: label column plus re/im coordinate
    /// columns at 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        let t = self.params.t();
        let mut header = vec!["label".to_string()];
        header.extend((0..t).flat_map(|k| [format!("re_{k}"), format!("im_{k}")]));
        writeln!(w, "{}", header.join(","))?;
        for (i, p) in self.symbols.iter().enumerate() {
            let label = match &self.labels {
                Some(ls) => ls[i].to_string(),
                None => i.to_string(),
            };
            let coords: Vec<String> = p
                .coords()
                .iter()
                .flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)])
                .collect();
            writeln!(w, "{},{}", label, coords.join(","))?;
        }
        Ok(())
    }
}

fn decode_grid(strides: &[u64], params: &CubeSplitParams, g: u64, ks: &mut [u64]) {
    let mut rem = g;
    for j in 0..ks.len() {
        ks[j] = rem / strides[j];
        debug_assert!(ks[j] < (1 << params.widths()[j]));
        rem %= strides[j];
    }
}

fn make_label(params: &CubeSplitParams, cell: usize, ks: &[u64]) -> Result<BitLabel> {
    let total = params.total_bits()?; // errors unless T is a power of two
    if total > 63 {
        return Err(Error::GuardExceeded(format!("label length {total} exceeds 63 bits")));
    }
    let mut bits = cell as u64;
    for (j, &k) in ks.iter().enumerate() {
        bits = (bits << params.widths()[j]) | gray_encode(k);
    }
    Ok(BitLabel::new(total, bits))
}

fn split_label(params: &CubeSplitParams, label: &BitLabel) -> Result<(usize, Vec<u64>)> {
    let total = params.total_bits()?;
    if label.len() != total {
        return Err(Error::InvalidParams(format!(
            "label length {} does not match B = {total}",
            label.len()
        )));
    }
    let mut rest = label.value();
    let dims = params.coord_dims();
    let mut ks = vec![0u64; dims];
    for j in (0..dims).rev() {
        let b = params.widths()[j];
        let mask = (1u64 << b) - 1;
        ks[j] = gray_decode(rest & mask);
        rest >>= b;
    }
    let cell = rest as usize;
    if cell >= params.t() {
        return Err(Error::InvalidParams(format!("cell bits decode to {cell} >= T")));
    }
    Ok((cell, ks))
}

/// Label of the symbol with cell index `cell` and local coordinates `a`
/// (each coordinate is quantized to its grid).
pub fn label_of(params: &CubeSplitParams, cell: usize, a: &[f64]) -> Result<BitLabel> {
    if cell >= params.t() || a.len() != params.coord_dims() {
        return Err(Error::InvalidParams("cell or coordinate dimension out of range".into()));
    }
    let ks: Vec<u64> = a
        .iter()
        .enumerate()
        .map(|(j, &aj)| params.quantize_coord(j, aj))
        .collect();
    make_label(params, cell, &ks)
}

/// Symbol carrying the given label.
pub fn label_to_symbol(params: &CubeSplitParams, label: &BitLabel) -> Result<GrassmannPoint> {
    let (cell, ks) = split_label(params, label)?;
    let a: Vec<f64> = ks
        .iter()
        .enumerate()
        .map(|(j, &k)| params.coord_value(j, k))
        .collect();
    Ok(encode(params, cell, &a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubesplit::inverse_map;
    use crate::grassmann::chordal_distance;
    use approx::assert_abs_diff_eq;
    use std::collections::HashSet;

    #[test]
    fn enumeration_counts() {
        assert_eq!(Constellation::symmetric(2, 1).unwrap().size(), 8);
        assert_eq!(Constellation::symmetric(4, 1).unwrap().size(), 256);
        assert_eq!(Constellation::symmetric(2, 4).unwrap().size(), 512);
    }

    #[test]
    fn symbols_are_distinct_lines_in_their_cells() {
        let c = Constellation::symmetric(4, 1).unwrap();
        for (i, x) in c.symbols().iter().enumerate() {
            let cell = c.cell_of(i);
            let pivot = x.coords()[cell].norm();
            for (k, z) in x.coords().iter().enumerate() {
                if k != cell {
                    assert!(z.norm() < pivot, "symbol {i} pivot not strict");
                }
            }
        }
        for i in 0..c.size() {
            for j in (i + 1)..c.size() {
                assert!(
                    chordal_distance(c.symbol(i), c.symbol(j)) > 1e-9,
                    "symbols {i} and {j} coincide"
                );
            }
        }
    }

    #[test]
    fn label_000_is_cell_one_quarter_quarter() {
        let c = Constellation::symmetric(2, 1).unwrap();
        let idx = c.label_to_index(&BitLabel::parse("000").unwrap()).unwrap();
        assert_eq!(c.cell_of(idx), 0);
        let lc = inverse_map(c.params(), c.symbol(idx)).unwrap();
        assert_abs_diff_eq!(lc.a[0], 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(lc.a[1], 0.25, epsilon = 1e-10);
    }

    #[test]
    fn all_labels_distinct_and_bijective() {
        let c = Constellation::symmetric(2, 3).unwrap(); // 128 symbols, B = 7
        let labels = c.labels().unwrap();
        let distinct: HashSet<u64> = labels.iter().map(|l| l.value()).collect();
        assert_eq!(distinct.len(), c.size());
        for (i, l) in labels.iter().enumerate() {
            assert_eq!(c.label_to_index(l).unwrap(), i);
        }
    }

    #[test]
    fn label_round_trip_through_symbols() {
        let params = CubeSplitParams::symmetric(4, 1).unwrap();
        let c = Constellation::build(params.clone()).unwrap();
        for i in 0..c.size() {
            let sym = label_to_symbol(&params, c.label(i).unwrap()).unwrap();
            assert!(chordal_distance(&sym, c.symbol(i)) < 1e-12);
            let lc = inverse_map(&params, &sym).unwrap();
            let back = label_of(&params, lc.cell, &lc.a).unwrap();
            assert_eq!(back, *c.label(i).unwrap());
        }
    }

    #[test]
    fn adjacent_grid_points_differ_in_one_label_bit() {
        let params = CubeSplitParams::symmetric(2, 3).unwrap();
        let c = Constellation::build(params.clone()).unwrap();
        let dims = params.coord_dims();
        for cell in 0..params.t() {
            for j in 0..dims {
                for k in 0..(1u64 << params.widths()[j]) - 1 {
                    let mut ks = vec![2u64; dims];
                    ks[j] = k;
                    let a = *c.label(c.index_of(cell, &ks)).unwrap();
                    ks[j] = k + 1;
                    let b = *c.label(c.index_of(cell, &ks)).unwrap();
                    assert_eq!(a.hamming(&b), 1, "cell {cell} dim {j} step {k}");
                }
            }
        }
    }

    #[test]
    fn non_power_of_two_t_enumerates_but_does_not_label() {
        let c = Constellation::build(CubeSplitParams::new(3, vec![1; 4]).unwrap()).unwrap();
        assert_eq!(c.size(), 3 * 16);
        assert!(c.labels().is_err());
    }

    #[test]
    fn guard_rejects_oversized_enumerations() {
        // T = 2 with B0 = 14 gives 2^29 symbols
        let params = CubeSplitParams::symmetric(2, 14).unwrap();
        assert!(Constellation::build(params).is_err());
    }

    #[test]
    fn csv_dump_has_label_column_and_size_rows() {
        let c = Constellation::symmetric(2, 1).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert!(lines[0].starts_with("label,re_0,im_0"));
        assert_eq!(lines[1].split(',').next().unwrap().len(), 3);
    }
}
