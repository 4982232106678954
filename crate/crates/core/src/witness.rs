//! Concrete assignments showing that a word is not real-eigenvalued (or not
//! PSD): explicit 2x2 templates, the scalar `(-1)` witness and a seeded
//! random search.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decider::{classify, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{
    default_tol, evaluate, rotation_matrix, spectrum, Assignment, Matrix, Spectrum,
    DEFAULT_RESIDUAL_TOL, MAX_DIM,
};
use crate::word::{Marker, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// A rotation matrix bound to a single variable.
    Rotation,
    /// `diag(1,-1)` and a reflection bound to two alternating variables.
    SymPair,
    /// One-by-one matrices with product `(-1)`.
    Scalar,
    /// Seeded random search.
    Random,
}

/// What a witness claims about the word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    NotRealEigenvalued,
    NotPsd,
}

impl WitnessKind {
    pub fn claim(self) -> Claim {
        match self {
            WitnessKind::Scalar => Claim::NotPsd,
            _ => Claim::NotRealEigenvalued,
        }
    }
}

/// Eigenvalue tolerances. `None` selects `1e-8 * (1 + ||P||_inf)` for the
/// evaluated product `P`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tolerances {
    pub imag: Option<f64>,
    pub psd: Option<f64>,
}

impl Tolerances {
    pub fn imag_for(&self, p: &Matrix<f64>) -> f64 {
        self.imag.unwrap_or_else(|| default_tol(p))
    }

    pub fn psd_for(&self, p: &Matrix<f64>) -> f64 {
        self.psd.unwrap_or_else(|| default_tol(p))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub dim: usize,
    pub assignment: Assignment<f64>,
    pub eigenvalue: Complex,
    pub trials_used: u64,
    pub seed: u64,
}

/// Serializable complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Complex {
    fn from(z: Complex64) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

impl From<Complex> for Complex64 {
    fn from(z: Complex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub claim: Claim,
    pub eigenvalues: Vec<Complex>,
    pub max_imag: f64,
    pub min_real: f64,
    pub residual: f64,
    pub imag_tol: f64,
    pub psd_tol: f64,
    pub passed: bool,
}

/// Random search configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    pub dims: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub tol: Tolerances,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            dims: vec![2, 3],
            trials: 10_000,
            seed: 0,
            tol: Tolerances::default(),
        }
    }
}

fn require_verdict(w: &Word, expected: Verdict) -> Result<()> {
    let got = classify(w).verdict;
    if got != expected {
        return Err(Error::Precondition(format!(
            "expected verdict {expected:?}, word is {got:?}"
        )));
    }
    Ok(())
}

fn product_spectrum(w: &Word, a: &Assignment<f64>) -> Result<(Matrix<f64>, Spectrum)> {
    let p = evaluate(w, a)?;
    let s = spectrum(&p, DEFAULT_RESIDUAL_TOL)?;
    Ok((p, s))
}

fn most_imaginary(s: &Spectrum) -> Complex64 {
    s.eigenvalues
        .iter()
        .copied()
        .max_by(|a, b| a.im.total_cmp(&b.im))
        .expect("non-empty spectrum")
}

fn bind(w: &Word, pairs: Vec<(usize, Matrix<f64>)>) -> Assignment<f64> {
    pairs
        .into_iter()
        .map(|(v, m)| (w.vars()[v].name.clone(), m))
        .collect()
}

/// Same variable throughout with a single non-symmetric marker.
fn power_base(w: &Word) -> Option<usize> {
    let f = w.factors();
    let first = *f.first()?;
    (first.marker != Marker::Sym && f.iter().all(|&g| g == first)).then_some(first.var.0)
}

/// Two distinct variables alternating, any markers, even degree.
fn alternating_pair(w: &Word) -> Option<(usize, usize)> {
    let f = w.factors();
    if f.len() < 2 || f.len() % 2 == 1 || f[0].var == f[1].var {
        return None;
    }
    f.iter()
        .enumerate()
        .all(|(i, g)| g.var == f[i % 2].var)
        .then_some((f[0].var.0, f[1].var.0))
}

/// Explicit 2x2 witnesses for three word shapes:
/// a single non-symmetric factor gets `M(pi/4)`;
/// `X^k` or `(X^T)^k` gets `M(pi/(2k))`, so the product is a quarter turn;
/// an alternating `(X1 X2)^(k/2)` gets `diag(1,-1)` and the reflection
/// `[[cos t, sin t], [sin t, -cos t]]` with `t = pi/(2k)`, whose product is
/// a rotation by `-pi/4`.
pub fn structured_witness(w: &Word) -> Result<Option<WitnessReport>> {
    require_verdict(w, Verdict::NotRealEigenvalued)?;
    let k = w.degree();
    let (kind, assignment) = if let Some(v) = power_base(w) {
        let theta = if k == 1 { PI / 4.0 } else { PI / (2.0 * k as f64) };
        (WitnessKind::Rotation, bind(w, vec![(v, rotation_matrix(theta))]))
    } else if let Some((x1, x2)) = alternating_pair(w) {
        let theta = PI / (2.0 * k as f64);
        let (s, c) = theta.sin_cos();
        let a = Matrix::diag(&[1.0, -1.0]);
        let b = Matrix::from_rows(vec![vec![c, s], vec![s, -c]]);
        (WitnessKind::SymPair, bind(w, vec![(x1, a), (x2, b)]))
    } else {
        return Ok(None);
    };
    let (_, s) = product_spectrum(w, &assignment)?;
    Ok(Some(WitnessReport {
        kind,
        dim: 2,
        assignment,
        eigenvalue: most_imaginary(&s).into(),
        trials_used: 0,
        seed: 0,
    }))
}

/// `(-1)` for the symmetric factor of an `L L^T S` word and `(1)` for every
/// other variable. `S` occurs an odd number of times, so the product is
/// `(-1)`.
pub fn psd_scalar_witness(w: &Word) -> Result<Option<WitnessReport>> {
    let cert = classify(w);
    if cert.verdict != Verdict::SymTimesPsd {
        return Err(Error::Precondition(format!(
            "expected verdict SymTimesPsd, word is {:?}",
            cert.verdict
        )));
    }
    let sym = cert.sym_var.expect("sym-times-psd certificate names its factor");
    let assignment: Assignment<f64> = w
        .used_vars()
        .into_iter()
        .map(|v| {
            let x = if v == sym { -1.0 } else { 1.0 };
            (w.var(v).name.clone(), Matrix::diag(&[x]))
        })
        .collect();
    let (p, _) = product_spectrum(w, &assignment)?;
    Ok(Some(WitnessReport {
        kind: WitnessKind::Scalar,
        dim: 1,
        assignment,
        eigenvalue: Complex64::new(p[(0, 0)], 0.0).into(),
        trials_used: 0,
        seed: 0,
    }))
}

fn trial_rng(seed: u64, dim: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((dim as u64) << 48) | trial);
    rng
}

/// Draws one assignment: entries uniform on `[-1, 1]`, symmetric variables
/// replaced by `(R + R^T) / 2`.
pub fn random_assignment(w: &Word, dim: usize, seed: u64, trial: u64) -> Assignment<f64> {
    let mut rng = trial_rng(seed, dim, trial);
    let unit = Uniform::new_inclusive(-1.0, 1.0);
    w.used_vars()
        .into_iter()
        .map(|v| {
            let r = Matrix::from_fn(dim, |_, _| unit.sample(&mut rng));
            let m = if w.var(v).symmetric { r.symmetrized() } else { r };
            (w.var(v).name.clone(), m)
        })
        .collect()
}

/// Seeded search over `opts.dims`, `opts.trials` draws per dimension.
/// Trials run in parallel; the lowest-index success is returned, so the
/// result matches a sequential scan.
pub fn random_witness_search(w: &Word, opts: &SearchOptions) -> Result<Option<WitnessReport>> {
    require_verdict(w, Verdict::NotRealEigenvalued)?;
    let mut used = 0u64;
    for &dim in &opts.dims {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::SizeGuard {
                what: "witness dimension",
                size: dim,
                limit: MAX_DIM,
            });
        }
        let hit = (0..opts.trials)
            .into_par_iter()
            .filter_map(|t| {
                let a = random_assignment(w, dim, opts.seed, t);
                let (p, s) = product_spectrum(w, &a).ok()?;
                let lambda = most_imaginary(&s);
                (lambda.im > opts.tol.imag_for(&p)).then_some((t, a, lambda))
            })
            .find_first(|_| true);
        if let Some((t, assignment, lambda)) = hit {
            return Ok(Some(WitnessReport {
                kind: WitnessKind::Random,
                dim,
                assignment,
                eigenvalue: lambda.into(),
                trials_used: used + t + 1,
                seed: opts.seed,
            }));
        }
        used += opts.trials;
    }
    Ok(None)
}

/// Structured templates, then the scalar witness, then random search.
/// Errors if the word is symmetric, since no witness exists.
pub fn find_witness(w: &Word, opts: &SearchOptions) -> Result<Option<WitnessReport>> {
    match classify(w).verdict {
        Verdict::Symmetric => Err(Error::Precondition(
            "word is symmetric, hence PSD for every assignment".into(),
        )),
        Verdict::SymTimesPsd => psd_scalar_witness(w),
        Verdict::NotRealEigenvalued => {
            if let Some(r) = structured_witness(w)? {
                return Ok(Some(r));
            }
            random_witness_search(w, opts)
        }
    }
}

/// Evaluates the claim of `r` from scratch.
pub fn verify_witness(w: &Word, r: &WitnessReport, tol: &Tolerances) -> Result<Verification> {
    verify_assignment(w, &r.assignment, r.kind.claim(), tol)
}

pub fn verify_assignment(
    w: &Word,
    assignment: &Assignment<f64>,
    claim: Claim,
    tol: &Tolerances,
) -> Result<Verification> {
    let (p, s) = product_spectrum(w, assignment)?;
    let imag_tol = tol.imag_for(&p);
    let psd_tol = tol.psd_for(&p);
    let max_imag = s.max_imag();
    let min_real = s.min_real();
    let passed = match claim {
        Claim::NotRealEigenvalued => max_imag > imag_tol,
        Claim::NotPsd => max_imag > imag_tol || min_real < -psd_tol,
    };
    Ok(Verification {
        claim,
        eigenvalues: s.eigenvalues.iter().map(|&z| z.into()).collect(),
        max_imag,
        min_real,
        residual: s.residual,
        imag_tol,
        psd_tol,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    const NONE: &[&str] = &[];

    #[test]
    fn fourth_power_gets_eighth_turn() {
        let w = parse_word("X X X X", NONE).unwrap();
        let r = structured_witness(&w).unwrap().unwrap();
        assert_eq!(r.kind, WitnessKind::Rotation);
        assert!(r.assignment["X"].max_abs_diff(&rotation_matrix(PI / 8.0)) == 0.0);
        let z: Complex64 = r.eigenvalue.into();
        assert!((z - Complex64::i()).norm() < 1e-12);
    }

    #[test]
    fn single_transpose_gets_quarter_pi() {
        let w = parse_word("A^T", NONE).unwrap();
        let r = structured_witness(&w).unwrap().unwrap();
        let z: Complex64 = r.eigenvalue.into();
        assert!((z - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-12);
    }

    #[test]
    fn sym_pair_gives_eighth_root_of_unity() {
        let w = parse_word("X Y", &["X", "Y"]).unwrap();
        let r = structured_witness(&w).unwrap().unwrap();
        assert_eq!(r.kind, WitnessKind::SymPair);
        let z: Complex64 = r.eigenvalue.into();
        assert!((z - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-12);
        assert!(verify_witness(&w, &r, &Tolerances::default()).unwrap().passed);
    }

    #[test]
    fn templates_do_not_fire_on_other_shapes() {
        for text in ["A B C", "A A B", "A B A", "A A^T A"] {
            let w = parse_word(text, NONE).unwrap();
            if classify(&w).verdict == Verdict::NotRealEigenvalued {
                assert!(structured_witness(&w).unwrap().is_none(), "{text}");
            }
        }
    }

    #[test]
    fn scalar_witness_is_minus_one() {
        let w = parse_word("X Y Y^T", &["X"]).unwrap();
        let r = psd_scalar_witness(&w).unwrap().unwrap();
        assert_eq!(r.assignment["X"], Matrix::diag(&[-1.0]));
        assert_eq!(r.assignment["Y"], Matrix::diag(&[1.0]));
        let v = verify_witness(&w, &r, &Tolerances::default()).unwrap();
        assert!(v.passed);
        assert_eq!(v.min_real, -1.0);
        let cube = parse_word("X X X", &["X"]).unwrap();
        assert_eq!(psd_scalar_witness(&cube).unwrap().unwrap().eigenvalue.re, -1.0);
    }

    #[test]
    fn preconditions() {
        let w = parse_word("A B B^T A^T", NONE).unwrap();
        assert!(psd_scalar_witness(&w).is_err());
        assert!(structured_witness(&w).is_err());
        assert!(random_witness_search(&w, &SearchOptions::default()).is_err());
        assert!(find_witness(&w, &SearchOptions::default()).is_err());
    }

    #[test]
    fn random_search_is_deterministic() {
        let w = parse_word("X Y Z", &["X", "Y", "Z"]).unwrap();
        let opts = SearchOptions {
            seed: 7,
            ..SearchOptions::default()
        };
        let a = random_witness_search(&w, &opts).unwrap().unwrap();
        let b = random_witness_search(&w, &opts).unwrap().unwrap();
        assert_eq!(a, b);
        assert!(verify_witness(&w, &a, &Tolerances::default()).unwrap().passed);
    }

    #[test]
    fn tampered_assignment_fails() {
        let w = parse_word("A B", NONE).unwrap();
        let mut r = find_witness(&w, &SearchOptions::default()).unwrap().unwrap();
        for m in r.assignment.values_mut() {
            *m = Matrix::zeros(m.n());
        }
        let v = verify_witness(&w, &r, &Tolerances::default()).unwrap();
        assert!(!v.passed);
        assert_eq!(v.max_imag, 0.0);
    }
}
