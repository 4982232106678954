use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed};
use serde::Serialize;

use super::transfer_matrix;
use crate::error::{Error, Result};
use crate::graphs::{
    block_with_path, endomorphisms_up_to, random_graph, sample_seed, for_each_hom, EdgeRootedGraph, HomSource, WeightedGraph,
};
use crate::linalg::io::{format_matrix, TextScalar};
use crate::linalg::{rotation_matrix, Matrix};
use crate::scalar::Scalar;

/// How the total weight `M[x,y] / eps^e(F)` of a path is spread over its
/// `ell` edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// Whole weight on the middle edge `(w_m, w_{m+1})`, `m = ceil(ell/2)`;
    /// other path edges weigh one. Keeps rational weights rational.
    Rational,
    /// `|total|^(1/ell)` on every edge, the sign on the middle edge.
    Spread,
}

/// Where the copy of `F + P_ell` replacing the arc `(x, y)` of `D` sits in
/// `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyLayout {
    pub x: usize,
    pub y: usize,
    /// Vertex `u` of `F` is `f_map[u]` in `H`.
    pub f_map: Vec<usize>,
    /// `w_1 = b, .., w_{ell+1} = y`.
    pub path: Vec<usize>,
    /// The path edge carrying the weight of `M[x, y]`.
    pub heavy: (usize, usize),
}

/// Weighted target `H` refuting positivity of the sun graph
/// `G(F, 2k, ell)`: vertices `0` and `1` are the vertices of the two-vertex
/// digraph `D` with adjacency `M`, each arc replaced by a copy of
/// `F + P_ell`.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleTarget<T> {
    pub h: WeightedGraph<T>,
    pub epsilon: T,
    pub placement: Placement,
    pub m: Matrix<T>,
    pub k: usize,
    pub ell: usize,
    pub f: EdgeRootedGraph,
    pub copies: Vec<CopyLayout>,
}

/// The structural conditions on `F` under which the sun graph is not
/// positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SunHypotheses {
    pub connected: bool,
    pub no_cut_vertex: bool,
    pub edges_in_triangles: bool,
    pub rigid: bool,
    /// The only non-identity endomorphism is an automorphism swapping the
    /// roots.
    pub root_swap_only: bool,
}

impl SunHypotheses {
    /// Number of aligned homomorphisms per closed walk in `D`: one for rigid
    /// `F`, two when `F` has the root swap and `ell` is odd.
    pub fn multiplicity(&self, ell: usize) -> Option<u32> {
        if !(self.connected && self.no_cut_vertex && self.edges_in_triangles) {
            return None;
        }
        if self.rigid {
            Some(1)
        } else if self.root_swap_only && ell % 2 == 1 {
            Some(2)
        } else {
            None
        }
    }
}

pub fn sun_hypotheses(f: &EdgeRootedGraph) -> Result<SunHypotheses> {
    let g = &f.graph;
    let endos = endomorphisms_up_to(g, 2)?;
    let id: Vec<usize> = (0..g.n()).collect();
    let root_swap_only = endos.len() == 2
        && endos.iter().any(|phi| {
            *phi != id && phi[f.a] == f.b && phi[f.b] == f.a && {
                let mut seen = vec![false; phi.len()];
                phi.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
            }
        });
    Ok(SunHypotheses {
        connected: g.is_connected(),
        no_cut_vertex: g.cut_vertices().is_empty(),
        edges_in_triangles: g.every_edge_in_triangle(),
        rigid: endos.len() == 1,
        root_swap_only,
    })
}

/// A block for the sun graph found by sampling: graph and root edge of a
/// rigid sample meeting the hypotheses.
#[derive(Clone, Debug, PartialEq)]
pub struct SunBlockSample {
    pub f: EdgeRootedGraph,
    pub hypotheses: SunHypotheses,
    pub index: u64,
    pub sample_seed: u64,
    pub tried: u64,
}

/// Samples `G(n, p)` with `n` cycling through `sizes` until a rigid graph
/// with no cut vertex and every edge in a triangle appears, rooted at its
/// first edge. Returns `None` after `budget` samples.
pub fn find_sun_block(
    sizes: std::ops::RangeInclusive<usize>,
    p: f64,
    seed: u64,
    budget: u64,
) -> Result<Option<SunBlockSample>> {
    let sizes: Vec<usize> = sizes.collect();
    if sizes.is_empty() {
        return Err(Error::Precondition("empty size range".into()));
    }
    for index in 0..budget {
        let n = sizes[(index % sizes.len() as u64) as usize];
        let s = sample_seed(seed, n, index);
        let g = random_graph(n, p, s);
        if !g.is_connected() || !g.every_edge_in_triangle() || !g.cut_vertices().is_empty() {
            continue;
        }
        let (a, b) = g.edges()[0];
        let f = EdgeRootedGraph::new(g, a, b)?;
        let hyp = sun_hypotheses(&f)?;
        if hyp.rigid {
            return Ok(Some(SunBlockSample {
                f,
                hypotheses: hyp,
                index,
                sample_seed: s,
                tried: index + 1,
            }));
        }
    }
    Ok(None)
}

/// `min(1e-6, 1 / ((17 Delta(F))^(2 k ell) + 1))`, further halved until
/// it is below `cos` and `sin` of `pi / 2k`.
pub fn default_epsilon(f: &EdgeRootedGraph, k: usize, ell: usize) -> BigRational {
    let base = BigInt::from(17 * f.graph.max_degree().max(1));
    let bound = num_traits::pow(base, 2 * k * ell);
    let mut eps = BigRational::new(BigInt::one(), bound + 1);
    let micro = BigRational::new(1.into(), 1_000_000.into());
    if eps > micro {
        eps = micro;
    }
    let theta = std::f64::consts::PI / (2.0 * k as f64);
    let cap = BigRational::from_f64(theta.cos().min(theta.sin())).unwrap_or_else(BigRational::one);
    while eps >= cap {
        eps /= BigRational::from_integer(2.into());
    }
    eps
}

/// A rational `2x2` matrix with `tr(M^(2k)) < 0`: `[[1,-1],[1,1]]` for
/// `k = 2`, otherwise the rotation by the rational point
/// `((1-t^2)/(1+t^2), 2t/(1+t^2))` with `t` close to `tan(pi/(4k))`.
pub fn rational_seed_matrix(k: usize) -> Matrix<BigRational> {
    let q = |n: i64| BigRational::from_integer(n.into());
    if k == 2 {
        return Matrix::from_rows(vec![vec![q(1), q(-1)], vec![q(1), q(1)]]);
    }
    let tan = (std::f64::consts::PI / (4.0 * k as f64)).tan();
    let t = BigRational::new(BigInt::from((tan * 1e6).round() as i64), 1_000_000.into());
    let d = q(1) + t.clone() * t.clone();
    let c = (q(1) - t.clone() * t.clone()) / d.clone();
    let s = (q(2) * t) / d;
    Matrix::from_rows(vec![vec![c.clone(), -s.clone()], vec![s, c]])
}

fn check_shape<T: Scalar>(f: &EdgeRootedGraph, k: usize, ell: usize, m: &Matrix<T>) -> Result<()> {
    if k < 2 || ell < 2 {
        return Err(Error::Precondition(format!("need k >= 2 and ell >= 2, got k = {k}, ell = {ell}")));
    }
    if m.n() != 2 {
        return Err(Error::Dimension("seed matrix must be 2x2".into()));
    }
    let hyp = sun_hypotheses(f)?;
    if hyp.multiplicity(ell).is_none() {
        return Err(Error::Precondition(format!("F violates the sun-graph hypotheses: {hyp:?}")));
    }
    Ok(())
}

impl<T: Scalar> CounterexampleTarget<T> {
    /// Builds `H` with the rational placement.
    pub fn rational(f: &EdgeRootedGraph, k: usize, ell: usize, epsilon: T, m: Matrix<T>) -> Result<Self> {
        check_shape(f, k, ell, &m)?;
        Ok(assemble(f, k, ell, epsilon, m, Placement::Rational, |total, ell, heavy| {
            let mut w = vec![T::one(); ell];
            w[heavy] = total.clone();
            w
        }))
    }

    /// `|V(H)| = 2 + 4 (|V(F)| + ell - 2)`.
    pub fn n(&self) -> usize {
        self.h.n()
    }
}

impl CounterexampleTarget<f64> {
    /// Builds `H` with `M` the rotation by `pi / 2k` and the root-of-weight
    /// placement.
    pub fn spread(f: &EdgeRootedGraph, k: usize, ell: usize, epsilon: f64) -> Result<Self> {
        let m = rotation_matrix(std::f64::consts::PI / (2.0 * k as f64));
        check_shape(f, k, ell, &m)?;
        Ok(assemble(f, k, ell, epsilon, m, Placement::Spread, |total: &f64, ell, heavy| {
            let mag = total.abs().powf(1.0 / ell as f64);
            let mut w = vec![mag; ell];
            if *total < 0.0 {
                w[heavy] = -mag;
            }
            w
        }))
    }
}

fn assemble<T: Scalar>(
    f: &EdgeRootedGraph,
    k: usize,
    ell: usize,
    epsilon: T,
    m: Matrix<T>,
    placement: Placement,
    spread: impl Fn(&T, usize, usize) -> Vec<T>,
) -> CounterexampleTarget<T> {
    let n = f.n();
    let per_copy = n - 1 + ell - 1;
    let mut h = WeightedGraph::empty(2 + 4 * per_copy, false);
    let e_f = f.graph.edge_count();
    let eps_pow = (0..e_f).fold(T::one(), |acc, _| acc * epsilon.clone());
    let heavy = ell.div_ceil(2) - 1;
    let mut next = 2;
    let mut copies = Vec::with_capacity(4);
    for x in 0..2 {
        for y in 0..2 {
            let f_map: Vec<usize> = (0..n)
                .map(|u| {
                    if u == f.a {
                        x
                    } else {
                        next += 1;
                        next - 1
                    }
                })
                .collect();
            let mut path = vec![f_map[f.b]];
            for _ in 1..ell {
                path.push(next);
                next += 1;
            }
            path.push(y);
            for (u, v) in f.graph.edges() {
                h.set_weight(f_map[u], f_map[v], epsilon.clone());
            }
            let total = m[(x, y)].clone() / eps_pow.clone();
            for (i, w) in spread(&total, ell, heavy).into_iter().enumerate() {
                h.set_weight(path[i], path[i + 1], w);
            }
            copies.push(CopyLayout {
                x,
                y,
                f_map,
                heavy: (path[heavy], path[heavy + 1]),
                path,
            });
        }
    }
    CounterexampleTarget {
        h,
        epsilon,
        placement,
        m,
        k,
        ell,
        f: f.clone(),
        copies,
    }
}

impl<T: TextScalar> CounterexampleTarget<T> {
    /// Weighted edge list followed by a commented manifest.
    pub fn to_text(&self) -> String {
        let mut out = crate::graphs::io::format_weighted(&self.h);
        out.push_str("# manifest\n");
        out.push_str(&format!("# epsilon: {}\n", self.epsilon.format_text()));
        let policy = match self.placement {
            Placement::Rational => "rational",
            Placement::Spread => "spread",
        };
        out.push_str(&format!("# placement: {policy}\n# k: {}\n# ell: {}\n", self.k, self.ell));
        for line in format_matrix(&self.m).lines() {
            out.push_str(&format!("# m: {line}\n"));
        }
        for c in &self.copies {
            out.push_str(&format!(
                "# copy {} {}: f_map {:?} path {:?} heavy {} {}\n",
                c.x, c.y, c.f_map, c.path, c.heavy.0, c.heavy.1
            ));
        }
        out
    }
}

/// Enumeration of single `F + P_ell` blocks of the sun graph into `H`. A
/// block map is aligned when `F` lands in the vertex set of one copy of `F`
/// and every path edge lands on a path edge of one copy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockTally<T> {
    /// Sum of `w_phi` over aligned homomorphisms of the sun graph.
    pub aligned: T,
    /// Sum over misaligned homomorphisms.
    pub misaligned: T,
    /// `c tr(M^(2k))`.
    pub aligned_expected: T,
    /// Every aligned block map between vertices of `D` weighs `M[x, y]`.
    pub aligned_weights_are_m_entries: bool,
    /// Largest `|w_phi|` over misaligned homomorphisms.
    pub max_misaligned: T,
    /// `eps max(1, ||M||_inf^(2k))`.
    pub misaligned_bound: T,
    pub aligned_block_maps: usize,
    pub misaligned_block_maps: usize,
}

/// Result of evaluating the sun graph against its counterexample target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SunReport<T> {
    pub value: T,
    pub negative: bool,
    pub k: usize,
    pub ell: usize,
    pub multiplicity: u32,
    pub tally: Option<BlockTally<T>>,
}

fn max_times<T: Scalar + PartialOrd>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.n();
    Matrix::from_fn(n, |i, j| {
        let mut best = T::zero();
        for l in 0..n {
            let (x, y) = (&a[(i, l)], &b[(l, j)]);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let p = x.clone() * y.clone();
            if p > best {
                best = p;
            }
        }
        best
    })
}

/// `hom(G(F, 2k, ell), H) = tr((S_F A^ell)^(2k))` with `S_F` the transfer
/// matrix of `F` and `A` the weights of `H`. With `tally`, every block map
/// is also enumerated and classified.
pub fn sun_negativity_check<T>(target: &CounterexampleTarget<T>, tally: bool) -> Result<SunReport<T>>
where
    T: Scalar + PartialOrd + Signed,
{
    let hyp = sun_hypotheses(&target.f)?;
    let c = hyp
        .multiplicity(target.ell)
        .ok_or_else(|| Error::Precondition("F violates the sun-graph hypotheses".into()))?;
    let s = transfer_matrix(&target.f, &target.h)?;
    let segment = s.mul(&target.h.matrix().pow(target.ell as u32));
    let power = segment.pow(2 * target.k as u32 - 1);
    let value = power.trace_of_product(&segment);
    let tally = if tally {
        Some(block_tally(target, c)?)
    } else {
        None
    };
    Ok(SunReport {
        negative: value < T::zero(),
        value,
        k: target.k,
        ell: target.ell,
        multiplicity: c,
        tally,
    })
}

fn block_tally<T>(target: &CounterexampleTarget<T>, c: u32) -> Result<BlockTally<T>>
where
    T: Scalar + PartialOrd + Signed,
{
    let f = &target.f;
    let n = f.n();
    let ell = target.ell;
    let nh = target.h.n();
    let blk = block_with_path(f, ell);
    let src = HomSource::from(&blk.graph);
    let path_vertices: Vec<usize> = std::iter::once(f.b).chain(n..n + ell).collect();
    let copy_sets: Vec<(FixedBitSet, Vec<(usize, usize)>)> = target
        .copies
        .iter()
        .map(|cl| {
            let mut fs = FixedBitSet::with_capacity(nh);
            cl.f_map.iter().for_each(|&v| fs.insert(v));
            let mut pe: Vec<(usize, usize)> =
                cl.path.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect();
            pe.sort_unstable();
            (fs, pe)
        })
        .collect();
    let mut al = Matrix::<T>::zeros(nh);
    let mut mis = Matrix::<T>::zeros(nh);
    let mut al_max = Matrix::<T>::zeros(nh);
    let mut mis_max = Matrix::<T>::zeros(nh);
    let (mut n_al, mut n_mis) = (0usize, 0usize);
    let mut weights_ok = true;
    for_each_hom(&src, &target.h, |phi, w| {
        let (x, y) = (phi[blk.a], phi[blk.b]);
        let aligned = copy_sets.iter().any(|(fs, _)| (0..n).all(|u| fs.contains(phi[u])))
            && copy_sets.iter().any(|(_, pe)| {
                path_vertices.windows(2).all(|w| {
                    let (u, v) = (phi[w[0]], phi[w[1]]);
                    pe.binary_search(&(u.min(v), u.max(v))).is_ok()
                })
            });
        let (sum, best) = if aligned {
            n_al += 1;
            if x < 2 && y < 2 && *w != target.m[(x, y)] {
                weights_ok = false;
            }
            (&mut al, &mut al_max)
        } else {
            n_mis += 1;
            (&mut mis, &mut mis_max)
        };
        sum[(x, y)] = sum[(x, y)].clone() + w.clone();
        let a = w.abs();
        if a > best[(x, y)] {
            best[(x, y)] = a;
        }
        ControlFlow::Continue(())
    })?;
    let two_k = 2 * target.k as u32;
    let all = al.add(&mis);
    let aligned = al.pow(two_k).trace();
    let total = all.pow(two_k).trace();
    let mut chain = mis_max.clone();
    let all_max = Matrix::from_fn(nh, |i, j| {
        if al_max[(i, j)] > mis_max[(i, j)] {
            al_max[(i, j)].clone()
        } else {
            mis_max[(i, j)].clone()
        }
    });
    for _ in 1..two_k {
        chain = max_times(&chain, &all_max);
    }
    let max_misaligned = (0..nh)
        .map(|i| chain[(i, i)].clone())
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let norm = (0..2)
        .map(|i| target.m[(i, 0)].abs() + target.m[(i, 1)].abs())
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let norm_pow = (0..two_k).fold(T::one(), |acc, _| acc * norm.clone());
    let scale = if norm_pow > T::one() { norm_pow } else { T::one() };
    Ok(BlockTally {
        misaligned: total - aligned.clone(),
        aligned,
        aligned_expected: target.m.pow(two_k).trace() * T::from_i64(c as i64),
        aligned_weights_are_m_entries: weights_ok,
        max_misaligned,
        misaligned_bound: target.epsilon.clone() * scale,
        aligned_block_maps: n_al,
        misaligned_block_maps: n_mis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_matrices_have_negative_trace() {
        for k in 2..=6 {
            let m = rational_seed_matrix(k);
            assert!(m.pow(2 * k as u32).trace() < BigRational::from_integer(0.into()), "k = {k}");
        }
        assert_eq!(
            rational_seed_matrix(2).pow(4).trace(),
            BigRational::from_integer((-8).into())
        );
    }

    #[test]
    fn epsilon_matches_bound() {
        let f = EdgeRootedGraph::triangle();
        let eps = default_epsilon(&f, 2, 3);
        let expected = BigRational::new(1.into(), num_traits::pow(BigInt::from(34), 12) + 1);
        assert_eq!(eps, expected);
    }

    #[test]
    fn triangle_is_not_admissible() {
        let f = EdgeRootedGraph::triangle();
        let hyp = sun_hypotheses(&f).unwrap();
        assert!(hyp.no_cut_vertex && hyp.edges_in_triangles && !hyp.rigid && !hyp.root_swap_only);
        assert!(CounterexampleTarget::rational(&f, 2, 3, BigRational::one(), rational_seed_matrix(2)).is_err());
    }
}
