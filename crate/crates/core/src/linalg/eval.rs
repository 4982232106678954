use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Matrix, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::word::{Marker, Word};

/// Variable name to matrix binding.
pub type Assignment<T> = BTreeMap<String, Matrix<T>>;

/// Entrywise absolute tolerance for matrices bound to symmetric variables.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Left-to-right product of `w` under `assignment`. `Transpose` factors use
/// the adjoint, which is the plain transpose for real and exact scalars.
pub fn evaluate<T: Scalar>(w: &Word, assignment: &Assignment<T>) -> Result<Matrix<T>> {
    let n = common_dim(w, assignment)?;
    for id in w.used_vars() {
        let var = w.var(id);
        if var.symmetric {
            let m = &assignment[&var.name];
            let gap = m.asymmetry();
            if gap > SYMMETRY_TOL {
                return Err(Error::NotSymmetric(format!(
                    "{} (asymmetry {gap:.3e})",
                    var.name
                )));
            }
        }
    }
    let mut acc = Matrix::identity(n);
    for f in w.factors() {
        let m = &assignment[&w.var(f.var).name];
        acc = match f.marker {
            Marker::Plain | Marker::Sym => acc.mul(m),
            Marker::Transpose => acc.mul(&m.adjoint()),
        };
    }
    Ok(acc)
}

/// Complex evaluation with `Transpose` read as conjugate transpose.
/// Words carrying `Sym` markers are rejected.
pub fn evaluate_complex(
    w: &Word,
    assignment: &Assignment<Complex64>,
) -> Result<Matrix<Complex64>> {
    if w.has_sym() {
        return Err(Error::Precondition(
            "symmetric markers are not supported over the complex numbers".into(),
        ));
    }
    evaluate(w, assignment)
}

fn common_dim<T: Scalar>(w: &Word, assignment: &Assignment<T>) -> Result<usize> {
    let mut dim = None;
    for id in w.used_vars() {
        let name = &w.var(id).name;
        let m = assignment
            .get(name)
            .ok_or_else(|| Error::MissingVariable(name.clone()))?;
        match dim {
            None => dim = Some(m.n()),
            Some(d) if d != m.n() => {
                return Err(Error::Dimension(format!(
                    "{name} is {0}x{0}, expected {d}x{d}",
                    m.n()
                )))
            }
            _ => {}
        }
    }
    let n = dim.ok_or(Error::EmptyWord)?;
    if n == 0 || n > MAX_DIM {
        return Err(Error::SizeGuard {
            what: "matrix dimension",
            size: n,
            limit: MAX_DIM,
        });
    }
    Ok(n)
}
