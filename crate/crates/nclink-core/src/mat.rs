//! Small dense complex matrices.
//!
//! The dimensions here are tiny (K x T codewords, M x K channels with K of a
//! handful), so a plain row-major `Vec` with naive kernels beats any library
//! dependency and keeps the crate `no_std`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn col(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    /// `self * rhs`. Panics on mismatched inner dimensions (a programming
    /// error, not an input error).
    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let v = self.get(r, k);
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..rhs.cols {
                    let cur = out.get(r, c);
                    out.set(r, c, cur + v * rhs.get(k, c));
                }
            }
        }
        out
    }

    /// `self * v` for a column vector.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// Returns a copy with row `r` multiplied by the real factor `s[r]`.
    pub fn scale_rows(&self, s: &[f64]) -> Mat {
        assert_eq!(self.rows, s.len(), "row scaling dimension mismatch");
        Mat::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * s[r])
    }
}

/// Cholesky factor `L` (lower triangular, `A = L L^H`) of a Hermitian
/// positive definite matrix. `None` when `A` is not numerically positive
/// definite.
pub fn cholesky(a: &Mat) -> Option<Mat> {
    assert_eq!(a.rows(), a.cols(), "cholesky needs a square matrix");
    let n = a.rows();
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut diag = a.get(j, j).re;
        for k in 0..j {
            diag -= l.get(j, k).norm_sqr();
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return None;
        }
        let dj = diag.sqrt();
        l.set(j, j, Complex64::new(dj, 0.0));
        for i in j + 1..n {
            let mut v = a.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, v / dj);
        }
    }
    Some(l)
}

/// Solves `L x = b` for lower-triangular `L`.
pub fn forward_substitute(l: &Mat, b: &[Complex64]) -> Vec<Complex64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let xk = x[k];
            x[i] -= l.get(i, k) * xk;
        }
        x[i] /= l.get(i, i);
    }
    x
}

/// Solves `L^H x = b` for lower-triangular `L`.
pub fn backward_substitute_herm(l: &Mat, b: &[Complex64]) -> Vec<Complex64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for k in i + 1..n {
            let xk = x[k];
            x[i] -= l.get(k, i).conj() * xk;
        }
        x[i] /= l.get(i, i).conj();
    }
    x
}

/// Solves `A x = b` for Hermitian positive definite `A`.
pub fn solve_hermitian(a: &Mat, b: &[Complex64]) -> Option<Vec<Complex64>> {
    let l = cholesky(a)?;
    Some(backward_substitute_herm(&l, &forward_substitute(&l, b)))
}

/// Solves `A X = B` column by column for Hermitian positive definite `A`.
pub fn solve_hermitian_multi(a: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(a.rows(), b.rows(), "solve dimension mismatch");
    let l = cholesky(a)?;
    let mut x = Mat::zeros(b.rows(), b.cols());
    for c in 0..b.cols() {
        let col = backward_substitute_herm(&l, &forward_substitute(&l, &b.col(c)));
        for r in 0..b.rows() {
            x.set(r, c, col[r]);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mul_and_hermitian() {
        let a = Mat::from_fn(2, 3, |r, cc| c((r * 3 + cc) as f64, 1.0));
        let ah = a.hermitian();
        assert_eq!(ah.rows(), 3);
        assert_eq!(ah.get(2, 1), c(5.0, -1.0));
        let g = ah.mul(&a);
        // Gram matrix must be Hermitian.
        for i in 0..3 {
            for j in 0..3 {
                let d = g.get(i, j) - g.get(j, i).conj();
                assert!(d.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cholesky_solves_hermitian_system() {
        // A = B^H B + I is Hermitian positive definite.
        let b = Mat::from_fn(3, 3, |r, cc| c((r + 2 * cc) as f64 * 0.3, (r as f64) - 1.0));
        let mut a = b.hermitian().mul(&b);
        for i in 0..3 {
            let d = a.get(i, i);
            a.set(i, i, d + c(1.0, 0.0));
        }
        let x_true = [c(1.0, -2.0), c(0.5, 0.25), c(-3.0, 1.0)];
        let rhs = a.mul_vec(&x_true);
        let x = solve_hermitian(&a, &rhs).expect("positive definite");
        for (xi, ti) in x.iter().zip(x_true.iter()) {
            assert!((xi - ti).norm() < 1e-10);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = Mat::zeros(2, 2);
        a.set(0, 0, c(1.0, 0.0));
        a.set(1, 1, c(-1.0, 0.0));
        assert!(cholesky(&a).is_none());
    }
}
