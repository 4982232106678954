use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{glued_hom_via_transfer, t_gsquare};
use crate::error::Result;
use crate::graphs::{hom_count, EdgeRootedGraph, Graph, WeightedGraph};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::word::Word;

/// The graph whose homomorphism values are sampled.
#[derive(Clone, Debug)]
pub enum SamplerSource {
    /// Counted by backtracking.
    Graph(Graph),
    /// A glued cycle of edge-rooted blocks, counted by transfer matrices.
    Glued(Vec<EdgeRootedGraph>),
    /// `G^2` of a word over a block family, counted as `tr(U^2)`.
    GSquare {
        word: Word,
        family: BTreeMap<String, EdgeRootedGraph>,
    },
}

impl SamplerSource {
    pub fn hom<T: Scalar>(&self, h: &WeightedGraph<T>) -> Result<T> {
        match self {
            SamplerSource::Graph(g) => hom_count(g, h),
            SamplerSource::Glued(fs) => glued_hom_via_transfer(fs, h),
            SamplerSource::GSquare { word, family } => t_gsquare(word, family, h),
        }
    }
}

/// Minimum homomorphism value over a batch of random targets.
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "T: Scalar + Serialize"))]
pub struct SamplerReport<T> {
    pub min_value: T,
    /// Index of the minimizing target; ties go to the smallest index.
    pub argmin: usize,
    pub target: WeightedGraph<T>,
    pub samples: usize,
    pub seed: u64,
    pub negative: bool,
}

fn target_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn random_symmetric<T: Scalar>(n: usize, mut entry: impl FnMut() -> T) -> WeightedGraph<T> {
    let mut h = WeightedGraph::empty(n, false);
    for u in 0..n {
        for v in u..n {
            h.set_weight(u, v, entry());
        }
    }
    h
}

/// Undirected target on `1..=max_h` vertices (loops allowed) with weights
/// uniform in `[-1, 1]`.
pub fn random_float_target(max_h: usize, seed: u64, index: usize) -> WeightedGraph<f64> {
    let mut rng = target_rng(seed, index);
    let n = rng.gen_range(1..=max_h.max(1));
    random_symmetric(n, || rng.gen_range(-1.0..=1.0))
}

/// As [`random_float_target`] with weights `j / 8`, `j` uniform in
/// `-8..=8`.
pub fn random_rational_target(max_h: usize, seed: u64, index: usize) -> WeightedGraph<BigRational> {
    let mut rng = target_rng(seed, index);
    let n = rng.gen_range(1..=max_h.max(1));
    random_symmetric(n, || {
        BigRational::new(BigInt::from(rng.gen_range(-8i64..=8)), BigInt::from(8))
    })
}

/// Evaluates `source` on `targets` random targets produced by `make(index)`
/// in parallel and returns the minimum.
pub fn positivity_sampler<T, F>(
    source: &SamplerSource,
    targets: usize,
    seed: u64,
    make: F,
) -> Result<SamplerReport<T>>
where
    T: Scalar + PartialOrd,
    F: Fn(usize) -> WeightedGraph<T> + Sync,
{
    let values = (0..targets.max(1))
        .into_par_iter()
        .map(|i| {
            let h = make(i);
            source.hom(&h).map(|v| (v, i, h))
        })
        .collect::<Result<Vec<_>>>()?;
    let (min_value, argmin, target) = values
        .into_iter()
        .reduce(|best, cur| if cur.0 < best.0 { cur } else { best })
        .unwrap_or_else(|| (T::zero(), 0, WeightedGraph::from_matrix(Matrix::zeros(1), false).expect("zero")));
    Ok(SamplerReport {
        negative: min_value < T::zero(),
        min_value,
        argmin,
        target,
        samples: targets.max(1),
        seed,
    })
}
