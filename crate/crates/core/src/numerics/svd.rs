//! Dominant left singular vector by power iteration on the smaller Gram
//! matrix, the workhorse of the greedy decoder.

use super::cmat::{inner, norm, normalize, ComplexMat, ComplexVec};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Default relative tolerance for the power iteration.
pub const SVD_DEFAULT_TOL: f64 = 1e-10;
/// Default iteration cap.
pub const SVD_DEFAULT_MAX_ITERS: usize = 500;
/// Relative gap below which the two leading singular values are treated as
/// equal and the direction as undefined.
pub const SVD_DEGENERATE_GAP: f64 = 1e-12;

/// Returns the unit-norm left singular vector of `y` associated with its
/// largest singular value, i.e. the maximizer of ||Y^H u||^2 over unit u.
///
/// The iteration runs on Y Y^H when T <= N and on Y^H Y otherwise, starting
/// from the Gram column of largest norm, so the result is deterministic for
/// a given input.  Returns [`Error::DegenerateSpectrum`] when the two
/// leading singular values coincide within tolerance (callers treat this as
/// a decoding erasure).
pub fn dominant_left_singular_vector(
    y: &ComplexMat,
    tol: f64,
    max_iters: usize,
) -> Result<ComplexVec> {
    let t = y.rows();
    let n = y.cols();
    if y.frob_norm_sq() == 0.0 {
        return Err(Error::Domain("zero matrix has no dominant direction".into()));
    }
    // N = 1 (or T = 1): the matrix is rank one, u is the normalized column.
    if n == 1 {
        let mut u = y.col(0).to_vec();
        normalize(&mut u);
        return Ok(u);
    }
    if t == 1 {
        return Ok(vec![Complex64::new(1.0, 0.0)]);
    }

    let left_gram = t <= n;
    let g = if left_gram { y.gram_rows() } else { y.gram_cols() };
    let (lambda1, v1, converged) = power_iterate(&g, None, tol, max_iters);
    let lambda2 = second_eigenvalue(&g, lambda1, &v1, max_iters.min(200));

    if !converged || lambda1 - lambda2 <= SVD_DEGENERATE_GAP * lambda1 {
        return Err(Error::DegenerateSpectrum);
    }

    if left_gram {
        Ok(v1)
    } else {
        let mut u = y.matvec(&v1);
        normalize(&mut u);
        Ok(u)
    }
}

/// Power iteration on a Hermitian PSD matrix, optionally deflated against a
/// fixed unit vector.  Returns (Rayleigh quotient, iterate, converged).
fn power_iterate(
    g: &ComplexMat,
    deflate: Option<(f64, &[Complex64])>,
    tol: f64,
    max_iters: usize,
) -> (f64, ComplexVec, bool) {
    let m = g.rows();
    let apply = |v: &[Complex64]| -> ComplexVec {
        let mut w = g.matvec(v);
        if let Some((lam, u)) = deflate {
            let p = inner(u, v);
            for (wi, &ui) in w.iter_mut().zip(u) {
                *wi -= lam * p * ui;
            }
        }
        w
    };

    // Removes the deflated direction from a candidate vector.
    let orthogonalize = |v: &mut ComplexVec| {
        if let Some((_, u)) = deflate {
            let p = inner(u, v);
            for (vi, &ui) in v.iter_mut().zip(u) {
                *vi -= p * ui;
            }
        }
    };

    // start: Gram column of largest norm after orthogonalization, ties to
    // the lowest index
    let mut v = {
        let mut best: Option<(f64, ComplexVec)> = None;
        for c in 0..m {
            let mut col = g.col(c).to_vec();
            orthogonalize(&mut col);
            let nn = norm(&col);
            if best.as_ref().is_none_or(|(bn, _)| nn > *bn) {
                best = Some((nn, col));
            }
        }
        let (bn, mut v0) = best.unwrap();
        if bn == 0.0 {
            // every column collapsed onto the deflated direction; restart
            // from an orthogonalized canonical basis vector
            let mut found = vec![Complex64::new(0.0, 0.0); m];
            for i in 0..m {
                let mut e = vec![Complex64::new(0.0, 0.0); m];
                e[i] = Complex64::new(1.0, 0.0);
                orthogonalize(&mut e);
                if normalize(&mut e) > 1e-8 {
                    found = e;
                    break;
                }
            }
            found
        } else {
            normalize(&mut v0);
            v0
        }
    };

    let mut lambda = 0.0;
    for _ in 0..max_iters {
        let w = apply(&v);
        lambda = inner(&v, &w).re; // real for Hermitian PSD
        let resid: f64 = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - lambda * vi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let mut next = w;
        if normalize(&mut next) == 0.0 {
            return (0.0, v, true); // operator annihilates v: eigenvalue 0
        }
        v = next;
        if resid <= tol * lambda.abs().max(1e-300) {
            return (lambda, v, true);
        }
    }
    (lambda, v, false)
}

/// Rough estimate of the second eigenvalue via deflated power iteration;
/// only the gap decision consumes it.
fn second_eigenvalue(g: &ComplexMat, lambda1: f64, v1: &[Complex64], iters: usize) -> f64 {
    let (lambda2, _, _) = power_iterate(g, Some((lambda1, v1)), 1e-6, iters);
    lambda2.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::cmat::proj_energy;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Deterministic LCG-based complex fills for test matrices.
    struct Lcg(u64);
    impl Lcg {
        fn f(&mut self) -> f64 {
            self.0 = self
                .0
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        }
        fn z(&mut self) -> Complex64 {
            c(self.f(), self.f())
        }
    }

    /// Two-sided Jacobi eigendecomposition of a small Hermitian matrix,
    /// used as the independent oracle for the power iteration.
    fn jacobi_hermitian_eig(g: &ComplexMat) -> (Vec<f64>, ComplexMat) {
        let m = g.rows();
        let mut a = g.clone();
        let mut q = ComplexMat::zeros(m, m);
        for i in 0..m {
            q.set(i, i, c(1.0, 0.0));
        }
        for _sweep in 0..60 {
            let mut off = 0.0;
            for p in 0..m {
                for r in (p + 1)..m {
                    off += a.get(p, r).norm_sqr();
                }
            }
            if off < 1e-28 {
                break;
            }
            for p in 0..m {
                for r in (p + 1)..m {
                    let apr = a.get(p, r);
                    if apr.norm() < 1e-300 {
                        continue;
                    }
                    let app = a.get(p, p).re;
                    let arr = a.get(r, r).re;
                    // phase to make the pivot real, then a real Jacobi rotation
                    let phase = apr / apr.norm();
                    let g_abs = apr.norm();
                    let tau = (arr - app) / (2.0 * g_abs);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let ch = 1.0 / (1.0 + t * t).sqrt();
                    let sh = t * ch;
                    // columns p and r of A and Q updated by the rotation
                    // [c, s*conj(phase); -s*phase, c]
                    let (cc, ss) = (ch, sh);
                    for k in 0..m {
                        let akp = a.get(k, p);
                        let akr = a.get(k, r);
                        a.set(k, p, akp * cc - akr * ss * phase.conj());
                        a.set(k, r, akp * ss * phase + akr * cc);
                        let qkp = q.get(k, p);
                        let qkr = q.get(k, r);
                        q.set(k, p, qkp * cc - qkr * ss * phase.conj());
                        q.set(k, r, qkp * ss * phase + qkr * cc);
                    }
                    for k in 0..m {
                        let apk = a.get(p, k);
                        let ark = a.get(r, k);
                        a.set(p, k, apk * cc - ark * ss * phase);
                        a.set(r, k, apk * ss * phase.conj() + ark * cc);
                    }
                }
            }
        }
        let eig: Vec<f64> = (0..m).map(|i| a.get(i, i).re).collect();
        (eig, q)
    }

    fn oracle_dominant(y: &ComplexMat) -> Vec<Complex64> {
        let small_right = y.cols() <= y.rows();
        let g = if small_right { y.gram_cols() } else { y.gram_rows() };
        let (eig, q) = jacobi_hermitian_eig(&g);
        let best = eig
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let v: Vec<Complex64> = (0..g.rows()).map(|i| q.get(i, best)).collect();
        if small_right {
            let mut u = y.matvec(&v);
            normalize(&mut u);
            u
        } else {
            v
        }
    }

    #[test]
    fn rank_one_input_recovers_direction() {
        let x = {
            let mut v = vec![c(0.3, 0.1), c(-0.4, 0.6), c(0.2, -0.5), c(0.1, 0.2)];
            normalize(&mut v);
            v
        };
        let h = vec![c(1.2, -0.3), c(0.4, 0.9)];
        let y = ComplexMat::outer(&x, &h);
        let u = dominant_left_singular_vector(&y, SVD_DEFAULT_TOL, SVD_DEFAULT_MAX_ITERS).unwrap();
        let overlap = inner(&u, &x).norm();
        assert!((overlap - 1.0).abs() < 1e-10, "|u^H x| = {overlap}");
    }

    #[test]
    fn identity_matrix_is_degenerate() {
        let mut y = ComplexMat::zeros(2, 2);
        y.set(0, 0, c(1.0, 0.0));
        y.set(1, 1, c(1.0, 0.0));
        match dominant_left_singular_vector(&y, SVD_DEFAULT_TOL, SVD_DEFAULT_MAX_ITERS) {
            Err(Error::DegenerateSpectrum) => {}
            other => panic!("expected degenerate spectrum, got {other:?}"),
        }
    }

    #[test]
    fn zero_matrix_is_rejected() {
        let y = ComplexMat::zeros(3, 2);
        assert!(dominant_left_singular_vector(&y, 1e-10, 100).is_err());
    }

    #[test]
    fn matches_jacobi_oracle_on_random_matrices() {
        let mut rng = Lcg(42);
        for trial in 0..50 {
            let (t, n) = match trial % 4 {
                0 => (4, 2),
                1 => (2, 4),
                2 => (3, 3),
                _ => (6, 3),
            };
            let data: Vec<Complex64> = (0..t * n).map(|_| rng.z()).collect();
            let y = ComplexMat::new(t, n, data).unwrap();
            let u = dominant_left_singular_vector(&y, 1e-12, 2000).unwrap();
            let u_oracle = oracle_dominant(&y);
            let overlap = inner(&u, &u_oracle).norm();
            assert!(
                overlap >= 1.0 - 1e-9,
                "trial {trial}: |u^H u_oracle| = {overlap}"
            );
        }
    }

    #[test]
    fn rayleigh_quotient_dominance_over_random_unit_vectors() {
        let mut rng = Lcg(7);
        let y = ComplexMat::new(4, 2, (0..8).map(|_| rng.z()).collect()).unwrap();
        let u = dominant_left_singular_vector(&y, 1e-12, 2000).unwrap();
        let best = proj_energy(&y, &u);
        for _ in 0..1000 {
            let mut v: Vec<Complex64> = (0..4).map(|_| rng.z()).collect();
            normalize(&mut v);
            assert!(proj_energy(&y, &v) <= best + 1e-9 * best);
        }
    }

    #[test]
    fn unit_norm_output() {
        let mut rng = Lcg(99);
        let y = ComplexMat::new(5, 2, (0..10).map(|_| rng.z()).collect()).unwrap();
        let u = dominant_left_singular_vector(&y, 1e-10, 500).unwrap();
        assert_relative_eq!(norm(&u), 1.0, max_relative = 1e-12);
    }
}
