use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::{Matrix, MAX_DIM};
use crate::error::{Error, Result};

/// Default bound on the normalized backward error of reported eigenvalues.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 10_000;

/// Eigenvalues with multiplicity plus the worst normalized backward error
/// `max_l sigma_min(M - l I) / ||M||_inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub residual: f64,
}

impl Spectrum {
    pub fn max_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.im.abs()).fold(0.0, f64::max)
    }

    pub fn min_real(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> Complex64 {
        self.eigenvalues.iter().sum()
    }
}

/// `1e-8 * (1 + ||m||_inf)`, the default imaginary-part and PSD tolerance.
pub fn default_tol<T: crate::Scalar>(m: &Matrix<T>) -> f64 {
    1e-8 * (1.0 + m.norm_inf())
}

pub fn is_real_spectrum(s: &Spectrum, imag_tol: f64) -> bool {
    s.max_imag() <= imag_tol
}

pub fn is_psd_spectrum(s: &Spectrum, tol: f64) -> bool {
    is_real_spectrum(s, tol) && s.min_real() >= -tol
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    if n > MAX_DIM {
        return Err(Error::SizeGuard {
            what: "matrix dimension",
            size: n,
            limit: MAX_DIM,
        });
    }
    Ok(())
}

/// Spectrum of a real matrix via real Schur decomposition.
pub fn spectrum(m: &Matrix<f64>, tol: f64) -> Result<Spectrum> {
    check_dim(m.n())?;
    let n = m.n();
    let dm = DMatrix::from_row_slice(n, n, m.as_slice());
    if dm.iter().any(|x| !x.is_finite()) {
        return Err(Error::Convergence("non-finite matrix entry".into()));
    }
    let schur = Schur::try_new(dm, f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| Error::Convergence("real Schur iteration did not converge".into()))?;
    let eig: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    finish(&m.to_complex(), eig, tol)
}

/// Spectrum of a complex matrix via complex Schur decomposition.
pub fn spectrum_complex(m: &Matrix<Complex64>, tol: f64) -> Result<Spectrum> {
    check_dim(m.n())?;
    let n = m.n();
    let dm = DMatrix::from_row_slice(n, n, m.as_slice());
    if dm.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::Convergence("non-finite matrix entry".into()));
    }
    let schur = Schur::try_new(dm, f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| Error::Convergence("complex Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let eig: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    finish(m, eig, tol)
}

fn finish(m: &Matrix<Complex64>, mut eig: Vec<Complex64>, tol: f64) -> Result<Spectrum> {
    if eig.len() != m.n() || eig.iter().any(|l| !l.re.is_finite() || !l.im.is_finite()) {
        return Err(Error::Convergence("eigenvalue extraction failed".into()));
    }
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let residual = backward_error(m, &eig);
    if residual > tol {
        return Err(Error::Convergence(format!(
            "eigenvalue residual {residual:.3e} exceeds tolerance {tol:.3e}"
        )));
    }
    Ok(Spectrum {
        eigenvalues: eig,
        residual,
    })
}

fn backward_error(m: &Matrix<Complex64>, eig: &[Complex64]) -> f64 {
    let n = m.n();
    let norm = m.norm_inf();
    if norm == 0.0 {
        return 0.0;
    }
    let base = DMatrix::from_row_slice(n, n, m.as_slice());
    eig.iter()
        .map(|&l| {
            let mut shifted = base.clone();
            for i in 0..n {
                shifted[(i, i)] -= l;
            }
            shifted.singular_values().min() / norm
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rotation_matrix;
    use std::f64::consts::PI;

    #[test]
    fn rotation_spectrum_is_unit_pair() {
        for k in 1..=6 {
            let theta = PI / (2.0 * k as f64);
            let s = spectrum(&rotation_matrix(theta), DEFAULT_RESIDUAL_TOL).unwrap();
            assert!((s.eigenvalues[0] - Complex64::new(theta.cos(), -theta.sin())).norm() < 1e-12);
            assert!((s.eigenvalues[1] - Complex64::new(theta.cos(), theta.sin())).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_spectrum() {
        let s = spectrum(&Matrix::identity(2), DEFAULT_RESIDUAL_TOL).unwrap();
        assert_eq!(s.eigenvalues, vec![Complex64::new(1.0, 0.0); 2]);
        assert!(is_psd_spectrum(&s, 1e-12));
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(
            spectrum(&Matrix::identity(17), 1e-9),
            Err(Error::SizeGuard { .. })
        ));
    }
}
