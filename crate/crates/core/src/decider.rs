//! Quadratic-time classification of words into the three spectral cases.
//!
//! A word is real-eigenvalued for every assignment exactly when some cyclic
//! shift reads `L L^T` (then it is also positive semi-definite) or
//! `L L^T S` with `S` a symmetric variable. Otherwise a matrix assignment
//! with a non-real eigenvalue exists; see [`crate::witness`].
//!
//! Among valid shifts the decider reports the one reached by the smallest
//! right rotation (shift `0` first, then `k-1`, `k-2`, ...), so that
//! `w w^T` always certifies with shift `0` and half-word `w`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{cyclic_shift, Factor, Marker, VarId, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Symmetric,
    SymTimesPsd,
    NotRealEigenvalued,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricSplit {
    pub shift: usize,
    pub half: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPlusSplit {
    pub shift: usize,
    pub half: Word,
    pub sym_var: VarId,
}

/// Decider output. `shift` and `half` are present for the two
/// real-eigenvalued verdicts; `sym_var` only for `SymTimesPsd`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub shift: Option<usize>,
    pub half: Option<Word>,
    pub sym_var: Option<VarId>,
    pub psd: bool,
    pub degree: usize,
    /// Factor comparisons spent by the decision.
    pub comparisons: u64,
    /// Read `^T` as the Hermitian adjoint and render verdicts accordingly.
    pub adjoint: bool,
}

/// Versioned JSON shape of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub schema: u32,
    pub verdict: String,
    pub shift: Option<usize>,
    pub half: Option<String>,
    pub sym_var: Option<String>,
    pub psd: bool,
    pub degree: usize,
    pub comparisons: u64,
}

impl Certificate {
    pub fn verdict_label(&self) -> &'static str {
        match (self.verdict, self.adjoint) {
            (Verdict::Symmetric, false) => "symmetric",
            (Verdict::Symmetric, true) => "self-adjoint",
            (Verdict::SymTimesPsd, _) => "sym-times-psd",
            (Verdict::NotRealEigenvalued, false) => "not-real-eigenvalued",
            (Verdict::NotRealEigenvalued, true) => "not-self-adjoint",
        }
    }

    pub fn record(&self, w: &Word) -> CertificateRecord {
        CertificateRecord {
            schema: 1,
            verdict: self.verdict_label().to_string(),
            shift: self.shift,
            half: self.half.as_ref().map(Word::product_string),
            sym_var: self.sym_var.map(|v| w.var(v).name.clone()),
            psd: self.psd,
            degree: self.degree,
            comparisons: self.comparisons,
        }
    }

    pub fn is_real_eigenvalued(&self) -> bool {
        self.verdict != Verdict::NotRealEigenvalued
    }
}

/// Left shifts in the order the decider tries them.
fn shift_order(k: usize) -> impl Iterator<Item = usize> {
    (0..k).map(move |r| (k - r) % k)
}

#[inline]
fn eq_counted(a: Factor, b: Factor, count: &mut u64) -> bool {
    *count += 1;
    a == b
}

/// Does the word rotated by `j` read `L L^T` with `|L| = k/2`?
fn symmetric_at(f: &[Factor], j: usize, count: &mut u64) -> bool {
    let k = f.len();
    (0..k / 2).all(|i| eq_counted(f[(j + k - 1 - i) % k], f[(j + i) % k].transposed(), count))
}

/// Does the word rotated by `j` read `L L^T S` with `S` symmetric?
fn sym_plus_at(f: &[Factor], j: usize, count: &mut u64) -> bool {
    let k = f.len();
    *count += 1;
    if f[(j + k - 1) % k].marker != Marker::Sym {
        return false;
    }
    let m = (k - 1) / 2;
    (0..m).all(|i| eq_counted(f[(j + k - 2 - i) % k], f[(j + i) % k].transposed(), count))
}

pub fn is_symmetric_counted(w: &Word, count: &mut u64) -> Option<SymmetricSplit> {
    let k = w.degree();
    if k == 0 || k % 2 == 1 {
        return None;
    }
    let f = w.factors();
    shift_order(k)
        .find(|&j| symmetric_at(f, j, count))
        .map(|j| {
            let shifted = cyclic_shift(w, j);
            SymmetricSplit {
                shift: j,
                half: w.with_factors(shifted.factors()[..k / 2].to_vec()),
            }
        })
}

pub fn is_symmetric(w: &Word) -> Option<SymmetricSplit> {
    is_symmetric_counted(w, &mut 0)
}

pub fn is_sym_plus_counted(w: &Word, count: &mut u64) -> Option<SymPlusSplit> {
    let k = w.degree();
    if k.is_multiple_of(2) {
        return None;
    }
    let f = w.factors();
    shift_order(k)
        .find(|&j| sym_plus_at(f, j, count))
        .map(|j| {
            let shifted = cyclic_shift(w, j);
            SymPlusSplit {
                shift: j,
                half: w.with_factors(shifted.factors()[..(k - 1) / 2].to_vec()),
                sym_var: shifted.factors()[k - 1].var,
            }
        })
}

pub fn is_sym_plus(w: &Word) -> Option<SymPlusSplit> {
    is_sym_plus_counted(w, &mut 0)
}

/// Classifies a normalized word. `psd` is set only for `Symmetric`: a
/// `L L^T S` word evaluates to `(-1)` under the scalar assignment with
/// `S = (-1)` and every other variable `(1)`.
pub fn classify(w: &Word) -> Certificate {
    let mut comparisons = 0;
    let degree = w.degree();
    if let Some(s) = is_symmetric_counted(w, &mut comparisons) {
        return Certificate {
            verdict: Verdict::Symmetric,
            shift: Some(s.shift),
            half: Some(s.half),
            sym_var: None,
            psd: true,
            degree,
            comparisons,
            adjoint: false,
        };
    }
    if let Some(s) = is_sym_plus_counted(w, &mut comparisons) {
        return Certificate {
            verdict: Verdict::SymTimesPsd,
            shift: Some(s.shift),
            half: Some(s.half),
            sym_var: Some(s.sym_var),
            psd: false,
            degree,
            comparisons,
            adjoint: false,
        };
    }
    Certificate {
        verdict: Verdict::NotRealEigenvalued,
        shift: None,
        half: None,
        sym_var: None,
        psd: false,
        degree,
        comparisons,
        adjoint: false,
    }
}

/// Classification of complex words where `^T` denotes the Hermitian
/// adjoint. The combinatorics are those of [`classify`] without symmetric
/// variables.
pub fn classify_adjoint(w: &Word) -> Result<Certificate> {
    if w.has_sym() {
        return Err(Error::Precondition(
            "symmetric variables are not supported for complex words".into(),
        ));
    }
    let mut c = classify(w);
    c.adjoint = true;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{parse_word, transpose_word};

    const NONE: &[&str] = &[];

    #[test]
    fn first_reference_product_is_symmetric() {
        let w = parse_word("A B B^T A^T", NONE).unwrap();
        let s = is_symmetric(&w).unwrap();
        assert_eq!(s.shift, 0);
        assert_eq!(s.half.product_string(), "A B");
    }

    #[test]
    fn second_reference_product_is_symmetric_after_shift() {
        let w = parse_word("B^T C C^T B A A^T", NONE).unwrap();
        let s = is_symmetric(&w).unwrap();
        assert_eq!(s.half.product_string(), "A^T B^T C");
        assert_eq!(s.shift, 5);
        let shifted = cyclic_shift(&w, s.shift);
        assert_eq!(shifted, s.half.concat(&transpose_word(&s.half)));
    }

    #[test]
    fn product_of_two_symmetric_variables_is_not_symmetric() {
        let w = parse_word("X1 X2", &["X1", "X2"]).unwrap();
        assert!(is_symmetric(&w).is_none());
        assert_eq!(classify(&w).verdict, Verdict::NotRealEigenvalued);
    }

    #[test]
    fn sym_plus_cases() {
        let x = parse_word("X", &["X"]).unwrap();
        let s = is_sym_plus(&x).unwrap();
        assert_eq!((s.shift, s.half.degree(), s.sym_var), (0, 0, VarId(0)));
        assert_eq!(s.half.product_string(), "I");

        let w = parse_word("X1 Y Y^T", &["X1"]).unwrap();
        let s = is_sym_plus(&w).unwrap();
        assert_eq!(s.half.product_string(), "Y");
        assert_eq!(w.var(s.sym_var).name, "X1");
        assert_eq!(s.shift, 1);

        assert!(is_sym_plus(&parse_word("A", NONE).unwrap()).is_none());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&parse_word("A B B^T A^T", NONE).unwrap());
        assert_eq!(c.verdict, Verdict::Symmetric);
        assert!(c.psd);

        let w = parse_word("X X X", &["X"]).unwrap();
        let c = classify(&w);
        assert_eq!(c.verdict, Verdict::SymTimesPsd);
        assert!(!c.psd);
        assert_eq!(c.half.unwrap().product_string(), "X");

        let c = classify(&parse_word("A B", NONE).unwrap());
        assert_eq!(c.verdict, Verdict::NotRealEigenvalued);
        assert!(c.shift.is_none() && c.half.is_none());
    }

    #[test]
    fn adjoint_classification() {
        let c = classify_adjoint(&parse_word("A B B^T A^T", NONE).unwrap()).unwrap();
        assert_eq!(c.verdict_label(), "self-adjoint");
        let c = classify_adjoint(&parse_word("A B", NONE).unwrap()).unwrap();
        assert_eq!(c.verdict_label(), "not-self-adjoint");
        assert!(classify_adjoint(&parse_word("A", &["A"]).unwrap()).is_err());
    }

    #[test]
    fn record_serializes() {
        let w = parse_word("X Y Y^T", &["X"]).unwrap();
        let r = classify(&w).record(&w);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"schema\":1"));
        assert!(json.contains("\"verdict\":\"sym-times-psd\""));
        assert!(json.contains("\"sym_var\":\"X\""));
    }
}
