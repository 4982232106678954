//! Small dense square matrices over any [`Scalar`], word evaluation and
//! complex spectra.

mod eval;
pub mod io;
mod spectrum;

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Scalar;

pub use eval::{evaluate, evaluate_complex, Assignment, SYMMETRY_TOL};
pub use spectrum::{
    default_tol, is_psd_spectrum, is_real_spectrum, spectrum, spectrum_complex, Spectrum,
    DEFAULT_RESIDUAL_TOL,
};

/// Largest dimension accepted by word evaluation and the eigensolver.
pub const MAX_DIM: usize = 16;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    /// Panics unless `rows` is square.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diag(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    /// Conjugate transpose; equals [`Matrix::transpose`] for real scalars.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    /// Product skipping zero entries of `self`, which keeps sparse exact
    /// products cheap.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch in product");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let slot = &mut out.data[i * n + j];
                    *slot = slot.clone() + prod;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Trace of `self * rhs` without forming the product.
    pub fn trace_of_product(&self, rhs: &Self) -> T {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut acc = T::zero();
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                let b = &rhs.data[k * n + i];
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
        }
        acc
    }

    /// Sum of all entries.
    pub fn total(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, a| acc + a.clone())
    }

    /// Largest entrywise `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = (self[(i, j)].clone() - self[(j, i)].clone()).abs_f64();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(Scalar::abs_f64).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).abs_f64())
            .fold(0.0, f64::max)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl Matrix<f64> {
    pub fn to_complex(&self) -> Matrix<Complex64> {
        self.map(|&x| Complex64::new(x, 0.0))
    }

    /// `(R + R^T) / 2`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.n, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }
}

impl<T: Scalar + Serialize> Serialize for Matrix<T> {
    /// Serializes as a list of rows.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[T]> = (0..self.n).map(|i| self.row(i)).collect();
        rows.serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(d)?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(de::Error::custom("matrix must be square and non-empty"));
        }
        Ok(Matrix::from_rows(rows))
    }
}

/// `[[cos t, -sin t], [sin t, cos t]]`.
pub fn rotation_matrix(theta: f64) -> Matrix<f64> {
    let (s, c) = theta.sin_cos();
    Matrix::from_rows(vec![vec![c, -s], vec![s, c]])
}
