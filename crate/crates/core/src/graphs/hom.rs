use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use super::{Digraph, EdgeRootedGraph, Graph, WeightedGraph};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Largest source graph accepted by the backtracking engine. Large enough
/// for the symmetrization of a 14-vertex graph.
pub const HOM_GUARD: usize = 26;

/// Source of a homomorphism count: vertices `0..n` and oriented edges. An
/// edge `(u, v)` contributes the target weight `w(phi(u), phi(v))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSource {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl From<&Graph> for HomSource {
    fn from(g: &Graph) -> Self {
        HomSource {
            n: g.n(),
            edges: g.edges(),
        }
    }
}

impl From<&Digraph> for HomSource {
    fn from(d: &Digraph) -> Self {
        HomSource {
            n: d.n,
            edges: d.arcs.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Back {
    /// Edge from an earlier vertex into the current one.
    From(usize),
    /// Edge from the current vertex to an earlier one.
    To(usize),
    Loop,
}

/// Vertex order (pinned vertices first, then greedily most-constrained)
/// and, per level, the edges back to already placed vertices.
struct Plan {
    order: Vec<usize>,
    back: Vec<Vec<Back>>,
}

fn guard(n: usize) -> Result<()> {
    if n > HOM_GUARD {
        return Err(Error::SizeGuard {
            what: "homomorphism source vertices",
            size: n,
            limit: HOM_GUARD,
        });
    }
    Ok(())
}

fn plan(src: &HomSource, pinned: &[usize]) -> Plan {
    let n = src.n;
    let mut undirected = vec![Vec::new(); n];
    for &(u, v) in &src.edges {
        if u != v {
            undirected[u].push(v);
            undirected[v].push(u);
        }
    }
    let mut placed = vec![false; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for &p in pinned {
        placed[p] = true;
        order.push(p);
    }
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let placed_nbrs = undirected[v].iter().filter(|&&w| placed[w]).count();
                (placed_nbrs, undirected[v].len(), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }
    let mut level = vec![0; n];
    for (l, &v) in order.iter().enumerate() {
        level[v] = l;
    }
    let mut back = vec![Vec::new(); n];
    for &(u, v) in &src.edges {
        if u == v {
            back[level[u]].push(Back::Loop);
        } else if level[u] < level[v] {
            back[level[v]].push(Back::From(level[u]));
        } else {
            back[level[u]].push(Back::To(level[v]));
        }
    }
    Plan { order, back }
}

/// Weighted enumeration state; `phi` is indexed by level.
struct Weighted<'a, T> {
    w: &'a Matrix<T>,
    out_sup: &'a [Vec<usize>],
    in_sup: &'a [Vec<usize>],
    plan: &'a Plan,
    phi: Vec<usize>,
}

fn supports<T: Scalar>(w: &Matrix<T>) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let n = w.n();
    let mut out_sup = vec![Vec::new(); n];
    let mut in_sup = vec![Vec::new(); n];
    for x in 0..n {
        for y in 0..n {
            if !w[(x, y)].is_zero() {
                out_sup[x].push(y);
                in_sup[y].push(x);
            }
        }
    }
    (out_sup, in_sup)
}

impl<T: Scalar> Weighted<'_, T> {
    /// Product of the back-edge weights at `level` if it is placed on `x`.
    fn local_weight(&self, level: usize, x: usize) -> Option<T> {
        let mut acc: Option<T> = None;
        for b in &self.plan.back[level] {
            let w = match *b {
                Back::From(l) => &self.w[(self.phi[l], x)],
                Back::To(l) => &self.w[(x, self.phi[l])],
                Back::Loop => &self.w[(x, x)],
            };
            if w.is_zero() {
                return None;
            }
            acc = Some(match acc {
                None => w.clone(),
                Some(a) => a * w.clone(),
            });
        }
        Some(acc.unwrap_or_else(T::one))
    }

    fn candidates(&self, level: usize) -> Candidates<'_> {
        let best = self.plan.back[level]
            .iter()
            .filter_map(|b| match *b {
                Back::From(l) => Some(&self.out_sup[self.phi[l]]),
                Back::To(l) => Some(&self.in_sup[self.phi[l]]),
                Back::Loop => None,
            })
            .min_by_key(|s| s.len());
        match best {
            Some(s) => Candidates::List(s),
            None => Candidates::All(self.w.n()),
        }
    }

    /// Sum over completions of levels `level..` of their weight.
    fn completions(&mut self, level: usize) -> T {
        if level == self.plan.order.len() {
            return T::one();
        }
        let mut acc = T::zero();
        let cands: Vec<usize> = self.candidates(level).iter().collect();
        for x in cands {
            if let Some(w) = self.local_weight(level, x) {
                self.phi[level] = x;
                let rest = self.completions(level + 1);
                if !rest.is_zero() {
                    acc = acc + w * rest;
                }
            }
        }
        acc
    }

    fn visit(
        &mut self,
        level: usize,
        partial: &T,
        f: &mut dyn FnMut(&[usize], &T) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if level == self.plan.order.len() {
            let mut phi = vec![0; level];
            for (l, &v) in self.plan.order.iter().enumerate() {
                phi[v] = self.phi[l];
            }
            return f(&phi, partial);
        }
        let cands: Vec<usize> = self.candidates(level).iter().collect();
        for x in cands {
            if let Some(w) = self.local_weight(level, x) {
                self.phi[level] = x;
                self.visit(level + 1, &(partial.clone() * w), f)?;
            }
        }
        ControlFlow::Continue(())
    }
}

enum Candidates<'a> {
    List(&'a [usize]),
    All(usize),
}

impl Candidates<'_> {
    fn iter(&self) -> Box<dyn Iterator<Item = usize> + '_> {
        match self {
            Candidates::List(s) => Box::new(s.iter().copied()),
            Candidates::All(n) => Box::new(0..*n),
        }
    }
}

fn weighted_count<T: Scalar>(src: &HomSource, h: &WeightedGraph<T>) -> Result<T> {
    guard(src.n)?;
    let p = plan(src, &[]);
    let (out_sup, in_sup) = supports(h.matrix());
    let mut ctx = Weighted {
        w: h.matrix(),
        out_sup: &out_sup,
        in_sup: &in_sup,
        plan: &p,
        phi: vec![0; src.n],
    };
    Ok(ctx.completions(0))
}

/// `hom(F, H) = sum over maps phi of prod over edges uv of w(phi u, phi v)`.
pub fn hom_count<T: Scalar>(f: &Graph, h: &WeightedGraph<T>) -> Result<T> {
    weighted_count(&HomSource::from(f), h)
}

/// Homomorphism count of a directed source, each arc `(u, v)` weighted by
/// `w(phi u, phi v)`.
pub fn hom_count_directed<T: Scalar>(f: &Digraph, h: &WeightedGraph<T>) -> Result<T> {
    weighted_count(&HomSource::from(f), h)
}

/// `S(x, y)`: weighted homomorphisms of `src` with `a -> x` and `b -> y`.
pub fn rooted_hom_matrix<T: Scalar>(
    src: &HomSource,
    a: usize,
    b: usize,
    h: &WeightedGraph<T>,
) -> Result<Matrix<T>> {
    guard(src.n)?;
    if a == b || a >= src.n || b >= src.n {
        return Err(Error::Precondition(format!("bad roots ({a},{b})")));
    }
    let p = plan(src, &[a, b]);
    let w = h.matrix();
    let n = h.n();
    let (out_sup, in_sup) = supports(w);
    let rows: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut ctx = Weighted {
                w,
                out_sup: &out_sup,
                in_sup: &in_sup,
                plan: &p,
                phi: vec![0; src.n],
            };
            let mut row = vec![T::zero(); n];
            let Some(wx) = ctx.local_weight(0, x) else {
                return row;
            };
            ctx.phi[0] = x;
            let cands: Vec<usize> = ctx.candidates(1).iter().collect();
            for y in cands {
                if let Some(wy) = ctx.local_weight(1, y) {
                    ctx.phi[1] = y;
                    let rest = ctx.completions(2);
                    if !rest.is_zero() {
                        row[y] = wx.clone() * wy * rest;
                    }
                }
            }
            row
        })
        .collect();
    Ok(Matrix::from_rows(rows))
}

/// Calls `f(phi, w_phi)` for every homomorphism with non-zero weight, in a
/// deterministic order. `phi` is indexed by source vertex.
pub fn for_each_hom<T: Scalar>(
    src: &HomSource,
    h: &WeightedGraph<T>,
    mut f: impl FnMut(&[usize], &T) -> ControlFlow<()>,
) -> Result<()> {
    guard(src.n)?;
    let p = plan(src, &[]);
    let (out_sup, in_sup) = supports(h.matrix());
    let mut ctx = Weighted {
        w: h.matrix(),
        out_sup: &out_sup,
        in_sup: &in_sup,
        plan: &p,
        phi: vec![0; src.n],
    };
    let _ = ctx.visit(0, &T::one(), &mut f);
    Ok(())
}

/// Unweighted enumeration with bitset candidate sets.
fn visit_homs(
    g: &Graph,
    h: &Graph,
    f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<()> {
    guard(g.n())?;
    let src = HomSource::from(g);
    let p = plan(&src, &[]);
    let mut phi = vec![0; g.n()];
    let mut all = FixedBitSet::with_capacity(h.n());
    all.insert_range(..);
    fn rec(
        level: usize,
        p: &Plan,
        h: &Graph,
        all: &FixedBitSet,
        phi: &mut [usize],
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if level == p.order.len() {
            let mut out = vec![0; level];
            for (l, &v) in p.order.iter().enumerate() {
                out[v] = phi[l];
            }
            return f(&out);
        }
        let mut cand = all.clone();
        for b in &p.back[level] {
            match *b {
                Back::From(l) | Back::To(l) => cand.intersect_with(h.neighbor_set(phi[l])),
                Back::Loop => cand.clear(),
            }
        }
        for x in cand.ones() {
            phi[level] = x;
            rec(level + 1, p, h, all, phi, f)?;
        }
        ControlFlow::Continue(())
    }
    let _ = rec(0, &p, h, &all, &mut phi, f);
    Ok(())
}

/// All homomorphisms `g -> h` as vertex maps.
pub fn homomorphisms(g: &Graph, h: &Graph) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    visit_homs(g, h, &mut |phi| {
        out.push(phi.to_vec());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn endomorphisms(g: &Graph) -> Result<Vec<Vec<usize>>> {
    homomorphisms(g, g)
}

fn is_bijective(phi: &[usize]) -> bool {
    let mut seen = vec![false; phi.len()];
    phi.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
}

pub fn automorphisms(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let mut out = endomorphisms(g)?;
    out.retain(|phi| is_bijective(phi));
    Ok(out)
}

/// Counts endomorphisms, stopping once `limit` is exceeded.
pub(crate) fn endomorphisms_up_to(g: &Graph, limit: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    visit_homs(g, g, &mut |phi| {
        out.push(phi.to_vec());
        if out.len() > limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

/// The identity is the only endomorphism.
pub fn is_rigid(g: &Graph) -> Result<bool> {
    Ok(endomorphisms_up_to(g, 1)?.len() == 1)
}

/// Does `F^sym` have exactly two endomorphisms, the identity and an
/// automorphism exchanging its roots?
pub fn hom_sym_check(f: &EdgeRootedGraph) -> Result<bool> {
    let s = f.symmetrize();
    let endos = endomorphisms_up_to(&s.graph, 2)?;
    if endos.len() != 2 {
        return Ok(false);
    }
    let id: Vec<usize> = (0..s.n()).collect();
    let Some(sigma) = endos.iter().find(|phi| **phi != id) else {
        return Ok(false);
    };
    Ok(endos.contains(&id) && is_bijective(sigma) && sigma[s.a] == s.b && sigma[s.b] == s.a)
}
