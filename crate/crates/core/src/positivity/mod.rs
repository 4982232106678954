//! Transfer-matrix evaluation of homomorphism counts of glued-cycle graphs,
//! the `G^2` positivity identity, the sun-graph counterexample target and a
//! random positivity sampler.

mod sampler;
mod target;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graphs::{rooted_hom_matrix, EdgeRootedGraph, HomSource, WeightedGraph};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::word::{Marker, Word};

pub use sampler::{
    positivity_sampler, random_float_target, random_rational_target, SamplerReport, SamplerSource,
};
pub use target::{
    default_epsilon, find_sun_block, rational_seed_matrix, sun_hypotheses, sun_negativity_check, BlockTally,
    CopyLayout, CounterexampleTarget, Placement, SunBlockSample, SunHypotheses, SunReport,
};

/// `S(x, y)`: weighted homomorphisms of a block pinned at its roots.
pub type TransferMatrix<T> = Matrix<T>;

/// `S(x, y) = sum of w_phi over homomorphisms F -> H with a -> x, b -> y`.
pub fn transfer_matrix<T: Scalar>(
    f: &EdgeRootedGraph,
    h: &WeightedGraph<T>,
) -> Result<TransferMatrix<T>> {
    rooted_hom_matrix(&HomSource::from(&f.graph), f.a, f.b, h)
}

/// Transfer matrix of `F` with its root edge deleted.
fn open_transfer_matrix<T: Scalar>(
    f: &EdgeRootedGraph,
    h: &WeightedGraph<T>,
) -> Result<TransferMatrix<T>> {
    let mut src = HomSource::from(&f.graph);
    let root = (f.a.min(f.b), f.a.max(f.b));
    src.edges.retain(|&e| e != root);
    rooted_hom_matrix(&src, f.a, f.b, h)
}

/// Trace of the ordered product.
pub fn cycle_trace<T: Scalar>(mats: &[Matrix<T>]) -> T {
    let (last, init) = mats.split_last().expect("non-empty product");
    let prefix = init
        .iter()
        .fold(Matrix::identity(last.n()), |acc, m| acc.mul(m));
    prefix.trace_of_product(last)
}

/// `hom(glue_cycle(fs), H)` as a trace of transfer matrices. With two blocks
/// both root edges land on the same edge of the glued graph, so the second
/// block's edge is dropped.
pub fn glued_hom_via_transfer<T: Scalar>(fs: &[EdgeRootedGraph], h: &WeightedGraph<T>) -> Result<T> {
    match fs {
        [] | [_] => Err(Error::Precondition("gluing needs at least two blocks".into())),
        [f1, f2] => Ok(transfer_matrix(f1, h)?.trace_of_product(&open_transfer_matrix(f2, h)?)),
        _ => {
            let mats = fs
                .iter()
                .map(|f| transfer_matrix(f, h))
                .collect::<Result<Vec<_>>>()?;
            Ok(cycle_trace(&mats))
        }
    }
}

/// The blocks `F_{i(1)}^{t(1)}, .., F_{i(k)}^{t(k)}` of `G^2` for `w`:
/// transposed factors use the transposed root, symmetric ones the
/// symmetrization.
pub fn gsquare_blocks(
    w: &Word,
    family: &BTreeMap<String, EdgeRootedGraph>,
) -> Result<Vec<EdgeRootedGraph>> {
    w.factors()
        .iter()
        .map(|f| {
            let name = &w.var(f.var).name;
            let g = family
                .get(name)
                .ok_or_else(|| Error::MissingVariable(name.clone()))?;
            Ok(match f.marker {
                Marker::Plain => g.clone(),
                Marker::Transpose => g.transposed(),
                Marker::Sym => g.symmetrize(),
            })
        })
        .collect()
}

/// `tr(U^2)` with `U` the product of the factors' transfer matrices
/// (`S`, `S^T`, or the symmetrization's `S^sym`). For words of degree at
/// least two this is `hom(G^2, H)`; for a single factor `G^2` consists of
/// two blocks sharing their root edge and the trace counts that edge twice.
pub fn t_gsquare<T: Scalar>(
    w: &Word,
    family: &BTreeMap<String, EdgeRootedGraph>,
    h: &WeightedGraph<T>,
) -> Result<T> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut cache: BTreeMap<usize, Matrix<T>> = BTreeMap::new();
    for id in w.used_vars() {
        let var = w.var(id);
        let f = family
            .get(&var.name)
            .ok_or_else(|| Error::MissingVariable(var.name.clone()))?;
        let s = if var.symmetric {
            transfer_matrix(&f.symmetrize(), h)?
        } else {
            transfer_matrix(f, h)?
        };
        cache.insert(id.0, s);
    }
    let mut u = Matrix::identity(h.n());
    for f in w.factors() {
        let s = &cache[&f.var.0];
        u = match f.marker {
            Marker::Plain | Marker::Sym => u.mul(s),
            Marker::Transpose => u.mul(&s.transpose()),
        };
    }
    Ok(u.trace_of_product(&u))
}
