//! Binary labels: cell bits as plain binary, coordinate bits as
//! binary-reflected Gray codes per dimension.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;

/// A bit string of up to 63 bits, most-significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitLabel {
    len: u32,
    bits: u64,
}

impl BitLabel {
    pub fn new(len: u32, bits: u64) -> Self {
        assert!(len >= 1 && len <= 63);
        debug_assert!(len == 63 || bits < (1u64 << len));
        Self { len, bits }
    }

    /// Number of bits (always at least 1).
    pub fn len(&self) -> u32 {
        self.len
    }

    /// Raw value with the first (leftmost) label bit most significant.
    pub fn value(&self) -> u64 {
        self.bits
    }

    /// Bit at position `j`, where position 0 is the first (cell) bit.
    pub fn bit(&self, j: u32) -> u8 {
        debug_assert!(j < self.len);
        ((self.bits >> (self.len - 1 - j)) & 1) as u8
    }

    /// Hamming distance to another label of the same length.
    pub fn hamming(&self, other: &BitLabel) -> u32 {
        debug_assert_eq!(self.len, other.len);
        (self.bits ^ other.bits).count_ones()
    }

    /// Label with bit `j` flipped.
    pub fn flip(&self, j: u32) -> BitLabel {
        BitLabel::new(self.len, self.bits ^ (1u64 << (self.len - 1 - j)))
    }

    /// Parses a string of '0'/'1' characters, MSB first.
    pub fn parse(s: &str) -> Result<Self> {
        let len = s.len() as u32;
        if len == 0 || len > 63 {
            return Err(Error::InvalidParams(format!("bad label length {len}")));
        }
        let mut bits = 0u64;
        for ch in s.chars() {
            bits = (bits << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::InvalidParams(format!("bad label char {ch:?}"))),
                };
        }
        Ok(Self { len, bits })
    }
}

impl std::fmt::Display for BitLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for j in 0..self.len {
            write!(f, "{}", self.bit(j))?;
        }
        Ok(())
    }
}

/// Binary-reflected Gray code of `k`.
pub fn gray_encode(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Inverse of [`gray_encode`].
pub fn gray_decode(g: u64) -> u64 {
    let mut k = g;
    let mut shift = 1u32;
    while shift < 64 {
        k ^= k >> shift;
        shift <<= 1;
    }
    k
}

fn check_allocation(t: usize, total_bits: u32) -> Result<(u32, u32, u32)> {
    if !t.is_power_of_two() || t < 2 {
        return Err(Error::LabelingUnsupported(t));
    }
    let cell_bits = t.trailing_zeros();
    let dims = 2 * (t as u32 - 1);
    if total_bits <= cell_bits {
        return Err(Error::InvalidParams(format!(
            "B = {total_bits} leaves no coordinate bits for T = {t}"
        )));
    }
    let coord_bits = total_bits - cell_bits;
    if coord_bits < dims {
        return Err(Error::InvalidParams(format!(
            "B = {total_bits} cannot give every one of the {dims} dimensions a bit"
        )));
    }
    Ok((cell_bits, coord_bits, dims))
}

/// Splits `total_bits - log2(T)` coordinate bits across the 2(T-1)
/// dimensions.  Widths differ by at most one; the remainder goes to the
/// lowest-indexed dimensions so the allocation is deterministic.
pub fn allocate_bits(t: usize, total_bits: u32) -> Result<Vec<u32>> {
    let (_, coord_bits, dims) = check_allocation(t, total_bits)?;
    let base = coord_bits / dims;
    let rem = coord_bits % dims;
    Ok((0..dims).map(|j| base + u32::from(j < rem)).collect())
}

/// Same split, but the remainder bits land on seeded-random dimensions.
pub fn allocate_bits_seeded(t: usize, total_bits: u32, seed: u64) -> Result<Vec<u32>> {
    let (_, coord_bits, dims) = check_allocation(t, total_bits)?;
    let base = coord_bits / dims;
    let rem = coord_bits % dims;
    let mut widths = vec![base; dims as usize];
    let mut order: Vec<usize> = (0..dims as usize).collect();
    let mut rng = crate::rng::base_rng(seed);
    order.shuffle(&mut rng);
    for &j in order.iter().take(rem as usize) {
        widths[j] += 1;
    }
    Ok(widths)
}
