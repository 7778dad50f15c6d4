//! Minimal complex vector/matrix kernel.
//!
//! Everything in this crate works on blocks of at most 64 x 64 complex
//! entries, so a thin column-major container plus a handful of free
//! functions beats a full linear-algebra dependency.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Complex column vector.
pub type ComplexVec = Vec<Complex64>;

/// Dense complex matrix, column-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMat {
    /// Builds a matrix from column-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Builds a matrix from column slices.
    pub fn from_columns(cols: &[ComplexVec]) -> Result<Self> {
        let ncols = cols.len();
        if ncols == 0 {
            return Err(Error::Dimension("matrix needs at least one column".into()));
        }
        let rows = cols[0].len();
        let mut data = Vec::with_capacity(rows * ncols);
        for c in cols {
            if c.len() != rows {
                return Err(Error::Dimension("ragged columns".into()));
            }
            data.extend_from_slice(c);
        }
        Ok(Self { rows, cols: ncols, data })
    }

    /// Rank-one matrix x h^T (outer product without conjugation).
    pub fn outer(x: &[Complex64], h: &[Complex64]) -> Self {
        let rows = x.len();
        let cols = h.len();
        let mut data = Vec::with_capacity(rows * cols);
        for &hj in h {
            for &xi in x {
                data.push(xi * hj);
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[c * self.rows + r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[c * self.rows + r] = v;
    }

    /// Column `c` as a slice.
    pub fn col(&self, c: usize) -> &[Complex64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    /// Row `r` copied out.
    pub fn row(&self, r: usize) -> ComplexVec {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    /// Squared Frobenius norm.
    pub fn frob_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Multiplies every entry by a scalar.
    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// y = A x.
    pub fn matvec(&self, x: &[Complex64]) -> ComplexVec {
        debug_assert_eq!(x.len(), self.cols);
        let mut y = vec![Complex64::new(0.0, 0.0); self.rows];
        for c in 0..self.cols {
            let xc = x[c];
            let col = self.col(c);
            for (yi, &aij) in y.iter_mut().zip(col) {
                *yi += aij * xc;
            }
        }
        y
    }

    /// Gram matrix A^H A (cols x cols, Hermitian).
    pub fn gram_cols(&self) -> ComplexMat {
        let n = self.cols;
        let mut g = ComplexMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, inner(self.col(i), self.col(j)));
            }
        }
        g
    }

    /// Gram matrix A A^H (rows x rows, Hermitian).
    pub fn gram_rows(&self) -> ComplexMat {
        let t = self.rows;
        let mut g = ComplexMat::zeros(t, t);
        for c in 0..self.cols {
            let col = self.col(c);
            for i in 0..t {
                for j in 0..t {
                    let v = g.get(i, j) + col[i] * col[j].conj();
                    g.set(i, j, v);
                }
            }
        }
        g
    }
}

/// Hermitian inner product <x, y> = sum conj(x_k) y_k.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Euclidean norm.
pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalizes in place; returns the original norm.
pub fn normalize(x: &mut [Complex64]) -> f64 {
    let n = norm(x);
    if n > 0.0 {
        let inv = 1.0 / n;
        for z in x.iter_mut() {
            *z *= inv;
        }
    }
    n
}

/// ||Y^H x||^2, the non-coherent decision metric.
pub fn proj_energy(y: &ComplexMat, x: &[Complex64]) -> f64 {
    debug_assert_eq!(y.rows(), x.len());
    (0..y.cols()).map(|c| inner(y.col(c), x).norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shape_and_access() {
        let m = ComplexMat::new(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)])
            .unwrap();
        assert_eq!(m.get(0, 1), c(3.0, 0.0));
        assert_eq!(m.col(1), &[c(3.0, 0.0), c(4.0, 0.0)]);
        assert!(ComplexMat::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn cauchy_schwarz_holds_to_tolerance() {
        // deterministic pseudo-random fill
        let mut s = 1234567u64;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for _ in 0..200 {
            let x: Vec<_> = (0..5).map(|_| c(next(), next())).collect();
            let y: Vec<_> = (0..5).map(|_| c(next(), next())).collect();
            let lhs = inner(&x, &y).norm();
            let rhs = norm(&x) * norm(&y);
            assert!(lhs <= rhs * (1.0 + 1e-12), "|<x,y>| = {lhs} > {rhs}");
        }
    }

    #[test]
    fn proj_energy_matches_direct_expansion() {
        let y = ComplexMat::new(
            2,
            2,
            vec![c(1.0, 1.0), c(0.5, -0.25), c(-1.0, 0.75), c(0.0, 2.0)],
        )
        .unwrap();
        let x = vec![c(0.6, 0.0), c(0.0, 0.8)];
        let direct: f64 = (0..2)
            .map(|j| inner(y.col(j), &x).norm_sqr())
            .sum();
        assert_relative_eq!(proj_energy(&y, &x), direct, max_relative = 1e-15);
    }

    #[test]
    fn outer_product_shape() {
        let x = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let h = vec![c(2.0, 0.0), c(0.0, -1.0), c(1.0, 1.0)];
        let m = ComplexMat::outer(&x, &h);
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert_eq!(m.get(1, 2), c(0.0, 1.0) * c(1.0, 1.0));
    }
}
