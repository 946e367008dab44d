//! Small dense complex matrices: products, tensor products, adjoints, and a
//! Jacobi eigensolver for hermitian matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::math::{cabs, carg, cis, sqrt};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, found: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from nested rows; panics on ragged input, so it is
    /// meant for literals.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged matrix literal");
            data.extend_from_slice(row.as_ref());
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged matrix literal");
            data.extend(row.as_ref().iter().map(|&x| C64::new(x, 0.0)));
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        let mut m = Self::zeros(a.len(), b.len());
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                m.data[i * b.len() + j] = x * y.conj();
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        self.rows
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.data[i * self.cols + j];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * cols + j * other.cols + l] =
                            a * other.data[k * other.cols + l];
                    }
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|&z| cabs(z)).fold(0.0, f64::max)
    }

    /// Max-norm distance; infinite if the shapes differ.
    pub fn max_diff(&self, other: &Matrix) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| cabs(a - b)).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Operator 2-norm, from the largest eigenvalue of `M^dagger M`.
    pub fn spectral_norm(&self) -> f64 {
        let gram = self.dagger().mul(self);
        let (vals, _) = gram.hermitian_eigen();
        sqrt(vals.iter().cloned().fold(0.0, f64::max).max(0.0))
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    /// Equality up to a global phase `e^{i phi}`, in max-norm.
    pub fn approx_eq_up_to_phase(&self, other: &Matrix, tol: f64) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        let (idx, _) = other
            .data
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, z)| if cabs(*z) > best.1 { (i, cabs(*z)) } else { best });
        let b = other.data[idx];
        let a = self.data[idx];
        if cabs(a) < 1e-300 || cabs(b) < 1e-300 {
            return self.max_diff(other) <= tol;
        }
        let phase = cis(carg(a) - carg(b));
        self.max_diff(&other.scale(phase)) <= tol
    }

    /// `max |U^dagger U - I|`.
    pub fn unitarity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.dagger().mul(self).max_diff(&Matrix::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Eigen-decomposition of a hermitian matrix by cyclic complex Jacobi
    /// rotations. Returns eigenvalues in ascending order and the matrix whose
    /// columns are the matching orthonormal eigenvectors.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, Matrix) {
        assert!(self.is_square(), "eigen-decomposition needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        // Symmetrize so tiny asymmetries do not accumulate.
        for i in 0..n {
            a.data[i * n + i] = C64::new(a.data[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let v = (a.data[i * n + j] + a.data[j * n + i].conj()) * 0.5;
                a.data[i * n + j] = v;
                a.data[j * n + i] = v.conj();
            }
        }
        let mut v = Matrix::identity(n);
        let scale = a.frobenius_norm().max(1e-300);
        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a.data[i * n + j].norm_sqr();
                }
            }
            if sqrt(off) <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.data[p * n + q];
                    let mag = cabs(apq);
                    if mag <= 1e-300 {
                        continue;
                    }
                    let phase = cis(-carg(apq));
                    let app = a.data[p * n + p].re;
                    let aqq = a.data[q * n + q].re;
                    let t = 0.5 * crate::math::atan2(2.0 * mag, app - aqq);
                    let (c, s) = (crate::math::cos(t), crate::math::sin(t));
                    // W = diag(1, e^{-i phi}) * [[c, -s], [s, c]]
                    let w00 = C64::new(c, 0.0);
                    let w01 = C64::new(-s, 0.0);
                    let w10 = phase * s;
                    let w11 = phase * c;
                    rotate_cols(&mut a, p, q, w00, w01, w10, w11);
                    rotate_rows_adjoint(&mut a, p, q, w00, w01, w10, w11);
                    rotate_cols(&mut v, p, q, w00, w01, w10, w11);
                    a.data[p * n + q] = ZERO;
                    a.data[q * n + p] = ZERO;
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let vals: Vec<f64> = (0..n).map(|i| a.data[i * n + i].re).collect();
        order.sort_by(|&x, &y| vals[x].partial_cmp(&vals[y]).unwrap_or(core::cmp::Ordering::Equal));
        let mut vecs = Matrix::zeros(n, n);
        for (new_j, &old_j) in order.iter().enumerate() {
            for i in 0..n {
                vecs.data[i * n + new_j] = v.data[i * n + old_j];
            }
        }
        (order.iter().map(|&i| vals[i]).collect(), vecs)
    }

    /// Eigenvalues of a hermitian matrix in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        self.hermitian_eigen().0
    }

    /// `f(H)` for hermitian `H` through its eigen-decomposition.
    pub fn hermitian_function(&self, f: impl Fn(f64) -> C64) -> Matrix {
        let (vals, vecs) = self.hermitian_eigen();
        let n = self.rows;
        let mut out = Matrix::zeros(n, n);
        for (k, &lam) in vals.iter().enumerate() {
            let fk = f(lam);
            for i in 0..n {
                let vik = vecs.data[i * n + k] * fk;
                for j in 0..n {
                    out.data[i * n + j] += vik * vecs.data[j * n + k].conj();
                }
            }
        }
        out
    }

    /// `e^{-i H t}` for hermitian `H`.
    pub fn evolution(&self, t: f64) -> Matrix {
        self.hermitian_function(|lam| cis(-lam * t))
    }

    /// Embeds `self` (acting on `targets`, first target most significant)
    /// into an `n`-qubit operator.
    pub fn embed(&self, targets: &[usize], n: usize) -> Matrix {
        let dim = 1usize << n;
        let k = targets.len();
        assert_eq!(self.rows, 1 << k);
        let mut out = Matrix::zeros(dim, dim);
        let tmask: usize = targets.iter().map(|&q| 1usize << (n - 1 - q)).sum();
        let sub = |i: usize| -> usize {
            let mut s = 0;
            for &q in targets {
                s = (s << 1) | ((i >> (n - 1 - q)) & 1);
            }
            s
        };
        let spread = |s: usize| -> usize {
            let mut i = 0;
            for (pos, &q) in targets.iter().enumerate() {
                if (s >> (k - 1 - pos)) & 1 == 1 {
                    i |= 1 << (n - 1 - q);
                }
            }
            i
        };
        for col in 0..dim {
            let rest = col & !tmask;
            let sc = sub(col);
            for sr in 0..self.rows {
                let v = self.data[sr * self.cols + sc];
                if v != ZERO {
                    out.data[(rest | spread(sr)) * dim + col] = v;
                }
            }
        }
        out
    }
}

fn rotate_cols(m: &mut Matrix, p: usize, q: usize, w00: C64, w01: C64, w10: C64, w11: C64) {
    let n = m.cols;
    for r in 0..m.rows {
        let x = m.data[r * n + p];
        let y = m.data[r * n + q];
        m.data[r * n + p] = x * w00 + y * w10;
        m.data[r * n + q] = x * w01 + y * w11;
    }
}

fn rotate_rows_adjoint(m: &mut Matrix, p: usize, q: usize, w00: C64, w01: C64, w10: C64, w11: C64) {
    let n = m.cols;
    for c in 0..n {
        let x = m.data[p * n + c];
        let y = m.data[q * n + c];
        m.data[p * n + c] = w00.conj() * x + w10.conj() * y;
        m.data[q * n + c] = w01.conj() * x + w11.conj() * y;
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Complex vector helpers.
pub mod vector {
    use super::*;

    pub fn kron(a: &[C64], b: &[C64]) -> Vec<C64> {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for &x in a {
            out.extend(b.iter().map(|&y| x * y));
        }
        out
    }

    pub fn inner(a: &[C64], b: &[C64]) -> C64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    pub fn norm(a: &[C64]) -> f64 {
        sqrt(a.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        a.iter().zip(b).map(|(x, y)| cabs(x - y)).fold(0.0, f64::max)
    }
}

/// Real linear algebra on small dense matrices stored row-major.
pub mod real {
    use super::*;

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(m: &[f64], n: usize) -> Option<Vec<f64>> {
        let mut a = m.to_vec();
        let mut inv = vec![0.0; n * n];
        for i in 0..n {
            inv[i * n + i] = 1.0;
        }
        for col in 0..n {
            let mut piv = col;
            for r in (col + 1)..n {
                if a[r * n + col].abs() > a[piv * n + col].abs() {
                    piv = r;
                }
            }
            if a[piv * n + col].abs() < 1e-300 {
                return None;
            }
            if piv != col {
                for c in 0..n {
                    a.swap(col * n + c, piv * n + c);
                    inv.swap(col * n + c, piv * n + c);
                }
            }
            let d = a[col * n + col];
            for c in 0..n {
                a[col * n + c] /= d;
                inv[col * n + c] /= d;
            }
            for r in 0..n {
                if r != col {
                    let f = a[r * n + col];
                    if f != 0.0 {
                        for c in 0..n {
                            a[r * n + c] -= f * a[col * n + c];
                            inv[r * n + c] -= f * inv[col * n + c];
                        }
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn mul_vec(m: &[f64], n: usize, v: &[f64]) -> Vec<f64> {
        (0..n).map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum()).collect()
    }

    /// Induced 1-norm (max column sum).
    pub fn norm1(m: &[f64], n: usize) -> f64 {
        (0..n).map(|j| (0..n).map(|i| m[i * n + j].abs()).sum::<f64>()).fold(0.0, f64::max)
    }
}
