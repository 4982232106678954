//! Simple graphs, edge-rooted graphs, weighted targets, gluing
//! constructions, homomorphism enumeration, walk-tree partitions and rigid
//! random graphs.

mod hom;
pub mod io;
mod random;
mod walk;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub(crate) use hom::endomorphisms_up_to;
pub(crate) use random::sample_seed;
pub use hom::{
    automorphisms, endomorphisms, for_each_hom, hom_count, hom_count_directed, hom_sym_check,
    homomorphisms, is_rigid, rooted_hom_matrix, HomSource, HOM_GUARD,
};
pub use random::{
    family_degree_checks, generate_rigid_family, random_graph, sample_rigid, select_roots, FamilyMember,
    FamilyOptions, PropertyCheck, RigidFamilyReport, RigidSample, RootSelection, RIGID_GUARD,
};
pub use walk::{
    neighborhood_degree_sequence, walk_tree_canonical_partition, walk_tree_partition,
    walk_tree_truncated, Partition, WalkTree,
};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
    nbrs: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![FixedBitSet::with_capacity(n); n],
            nbrs: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}`; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::Precondition(format!("edge ({u},{v}) out of range for n = {n}")));
        }
        if u == v {
            return Err(Error::Precondition(format!("loop at {u} in a simple graph")));
        }
        if !self.adj[u].contains(v) {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
            let pos = self.nbrs[u].partition_point(|&x| x < v);
            self.nbrs[u].insert(pos, v);
            let pos = self.nbrs[v].partition_point(|&x| x < u);
            self.nbrs[v].insert(pos, u);
        }
        Ok(())
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v).expect("in range");
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.add_edge(u, (u + 1) % n).expect("in range");
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u).expect("in range");
        }
        g
    }

    /// `K_{1,leaves}` with centre `0`.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::empty(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v).expect("in range");
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    #[inline]
    pub fn neighbor_set(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|u| self.nbrs[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> FixedBitSet {
        let mut s = self.adj[u].clone();
        s.intersect_with(&self.adj[v]);
        s
    }

    /// Does the vertex set `s` span a triangle?
    pub fn has_triangle_in(&self, s: &FixedBitSet) -> bool {
        s.ones().any(|x| {
            let mut rest = self.adj[x].clone();
            rest.intersect_with(s);
            rest.ones()
                .filter(|&y| y > x)
                .any(|y| rest.ones().any(|z| z > y && self.has_edge(y, z)))
        })
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_without(None)
    }

    fn is_connected_without(&self, removed: Option<usize>) -> bool {
        let n = self.n();
        let Some(start) = (0..n).find(|&v| Some(v) != removed) else {
            return true;
        };
        let mut seen = FixedBitSet::with_capacity(n);
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.nbrs[v] {
                if Some(w) != removed && !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen.count_ones(..) == n - usize::from(removed.is_some())
    }

    pub fn cut_vertices(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&v| !self.is_connected_without(Some(v)))
            .collect()
    }

    pub fn every_edge_in_triangle(&self) -> bool {
        self.edges()
            .into_iter()
            .all(|(u, v)| self.common_neighbors(u, v).count_ones(..) > 0)
    }

    /// Vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut g = Graph::empty(off + other.n());
        for (u, v) in self.edges() {
            g.add_edge(u, v).expect("in range");
        }
        for (u, v) in other.edges() {
            g.add_edge(u + off, v + off).expect("in range");
        }
        g
    }

    /// `g` with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]).expect("in range");
        }
        g
    }
}

/// Directed graph on `0..n`; loops allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl Digraph {
    /// The directed cycle `0 -> 1 -> ... -> k-1 -> 0`.
    pub fn directed_cycle(k: usize) -> Self {
        Digraph {
            n: k,
            arcs: (0..k).map(|u| (u, (u + 1) % k)).collect(),
        }
    }
}

/// A graph with a distinguished ordered edge `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRootedGraph {
    pub graph: Graph,
    pub a: usize,
    pub b: usize,
}

impl EdgeRootedGraph {
    pub fn new(graph: Graph, a: usize, b: usize) -> Result<Self> {
        if a >= graph.n() || b >= graph.n() || !graph.has_edge(a, b) {
            return Err(Error::Precondition(format!("root ({a},{b}) is not an edge")));
        }
        Ok(EdgeRootedGraph { graph, a, b })
    }

    /// A single edge rooted at `(0, 1)`.
    pub fn edge() -> Self {
        EdgeRootedGraph::new(Graph::complete(2), 0, 1).expect("edge")
    }

    /// `K_3` rooted at `(0, 1)`.
    pub fn triangle() -> Self {
        EdgeRootedGraph::new(Graph::complete(3), 0, 1).expect("edge")
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// The same graph rooted at `(b, a)`.
    pub fn transposed(&self) -> Self {
        EdgeRootedGraph {
            graph: self.graph.clone(),
            a: self.b,
            b: self.a,
        }
    }

    /// Two copies of `F` with the first copy's `a` glued to the second copy's
    /// `b` and vice versa. The result has `2n - 2` vertices, `2e - 1` edges and
    /// an automorphism exchanging its roots.
    pub fn symmetrize(&self) -> Self {
        let g = glue_blocks(&[block_of(self), block_of(self)]);
        EdgeRootedGraph::new(g.graph, g.cycle[0], g.cycle[1]).expect("root edge survives gluing")
    }
}

/// A graph with two distinguished, not necessarily adjacent, attachment
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub graph: Graph,
    pub a: usize,
    pub b: usize,
}

fn block_of(f: &EdgeRootedGraph) -> Block {
    Block {
        graph: f.graph.clone(),
        a: f.a,
        b: f.b,
    }
}

/// `F` with a path `w_1 .. w_{ell+1}` attached at `w_1 = b`, attached at
/// `(a, w_{ell+1})`. Path vertices are numbered `n(F) .. n(F) + ell - 1`.
pub fn block_with_path(f: &EdgeRootedGraph, ell: usize) -> Block {
    let n = f.n();
    let mut g = Graph::empty(n + ell);
    for (u, v) in f.graph.edges() {
        g.add_edge(u, v).expect("in range");
    }
    let mut prev = f.b;
    for i in 0..ell {
        g.add_edge(prev, n + i).expect("in range");
        prev = n + i;
    }
    Block {
        graph: g,
        a: f.a,
        b: prev,
    }
}

/// Result of gluing blocks around a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedCycle {
    pub graph: Graph,
    /// Cycle vertices `v_1 .. v_k`; block `i` is attached at
    /// `(cycle[i], cycle[i+1])`.
    pub cycle: Vec<usize>,
    /// Block `i`'s vertex `u` lands on `maps[i][u]`.
    pub maps: Vec<Vec<usize>>,
}

/// Identifies `b_{i-1}`, `a_i` and `v_i` cyclically. Edges shared by
/// several blocks (the common root edge when there are two edge-rooted
/// blocks) appear once.
pub fn glue_blocks(blocks: &[Block]) -> GluedCycle {
    let k = blocks.len();
    let cycle: Vec<usize> = (0..k).collect();
    let mut next = k;
    let mut maps = Vec::with_capacity(k);
    for (i, blk) in blocks.iter().enumerate() {
        let map: Vec<usize> = (0..blk.graph.n())
            .map(|u| {
                if u == blk.a {
                    cycle[i]
                } else if u == blk.b {
                    cycle[(i + 1) % k]
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        maps.push(map);
    }
    let mut g = Graph::empty(next);
    for (blk, map) in blocks.iter().zip(&maps) {
        for (u, v) in blk.graph.edges() {
            g.add_edge(map[u], map[v]).expect("in range");
        }
    }
    GluedCycle {
        graph: g,
        cycle,
        maps,
    }
}

/// `G(F_1, .., F_k)`: the blocks glued along `C_k`.
pub fn glue_cycle(fs: &[EdgeRootedGraph]) -> Result<GluedCycle> {
    if fs.len() < 2 {
        return Err(Error::Precondition("gluing needs at least two blocks".into()));
    }
    Ok(glue_blocks(&fs.iter().map(block_of).collect::<Vec<_>>()))
}

/// `G^2(F_1, .., F_k) = G(F_1, .., F_k, F_1, .., F_k)` with fresh copies.
pub fn g_square(fs: &[EdgeRootedGraph]) -> Result<GluedCycle> {
    if fs.is_empty() {
        return Err(Error::Precondition("empty block list".into()));
    }
    let doubled: Vec<EdgeRootedGraph> = fs.iter().chain(fs).cloned().collect();
    glue_cycle(&doubled)
}

/// The sun graph `G(F, 2k, ell)`: `C_{2k(ell+1)}` with `2k` copies of `F`
/// rooted on every `(ell+1)`-th cycle edge. Block `i` of the result is
/// `F + P_ell`; its map sends `F`'s vertices first, then the path interior.
pub fn sun_graph(f: &EdgeRootedGraph, two_k: usize, ell: usize) -> Result<GluedCycle> {
    if two_k < 4 || two_k % 2 == 1 {
        return Err(Error::Precondition(format!(
            "sun graph needs an even number of copies >= 4, got {two_k}"
        )));
    }
    let blk = block_with_path(f, ell);
    Ok(glue_blocks(&vec![blk; two_k]))
}

/// Edge-weighted target graph with a dense weight matrix; zero means no
/// edge. Loops are permitted. Undirected targets keep the matrix symmetric.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(bound(serialize = "T: Scalar + serde::Serialize"))]
pub struct WeightedGraph<T> {
    weights: Matrix<T>,
    directed: bool,
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn empty(n: usize, directed: bool) -> Self {
        WeightedGraph {
            weights: Matrix::zeros(n),
            directed,
        }
    }

    /// Unit weights on the edges of `g`.
    pub fn from_graph(g: &Graph) -> Self {
        let mut h = Self::empty(g.n(), false);
        for (u, v) in g.edges() {
            h.set_weight(u, v, T::one());
        }
        h
    }

    /// Errors if `directed` is false and `m` is not symmetric.
    pub fn from_matrix(m: Matrix<T>, directed: bool) -> Result<Self> {
        if !directed && m.asymmetry() != 0.0 {
            return Err(Error::NotSymmetric("undirected target weights".into()));
        }
        Ok(WeightedGraph {
            weights: m,
            directed,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> &T {
        &self.weights[(u, v)]
    }

    /// Sets `w(u, v)`, and `w(v, u)` for undirected targets.
    pub fn set_weight(&mut self, u: usize, v: usize, w: T) {
        if !self.directed {
            self.weights[(v, u)] = w.clone();
        }
        self.weights[(u, v)] = w;
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.weights
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> WeightedGraph<U> {
        WeightedGraph {
            weights: self.weights.map(f),
            directed: self.directed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_symmetrization() {
        let s = EdgeRootedGraph::triangle().symmetrize();
        assert_eq!(s.n(), 4);
        assert_eq!(s.graph.edge_count(), 5);
        assert!(s.graph.has_edge(s.a, s.b));
    }

    #[test]
    fn symmetrization_counts() {
        let f = EdgeRootedGraph::new(Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 1)]).unwrap(), 1, 2)
            .unwrap();
        let s = f.symmetrize();
        assert_eq!(s.n(), 2 * f.n() - 2);
        assert_eq!(s.graph.edge_count(), 2 * f.graph.edge_count() - 1);
    }

    #[test]
    fn glue_three_triangles() {
        let t = EdgeRootedGraph::triangle();
        let g = glue_cycle(&[t.clone(), t.clone(), t]).unwrap();
        assert_eq!(g.graph.n(), 6);
        assert_eq!(g.graph.edge_count(), 9);
        for i in 0..3 {
            assert!(g.graph.has_edge(g.cycle[i], g.cycle[(i + 1) % 3]));
        }
    }

    #[test]
    fn g_square_of_four_blocks_has_c8_roots() {
        let e = EdgeRootedGraph::edge();
        let t = EdgeRootedGraph::triangle();
        let g = g_square(&[e.clone(), t.clone(), e, t]).unwrap();
        assert_eq!(g.cycle.len(), 8);
        for i in 0..8 {
            assert!(g.graph.has_edge(g.cycle[i], g.cycle[(i + 1) % 8]));
        }
        assert_eq!(g.graph.n(), 8 + 4);
    }

    #[test]
    fn sun_vertex_count() {
        let t = EdgeRootedGraph::triangle();
        for (k, ell) in [(2, 0), (2, 2), (3, 1)] {
            let s = sun_graph(&t, 2 * k, ell).unwrap();
            assert_eq!(s.graph.n(), 2 * k * (ell + 1) + 2 * k * (t.n() - 2));
        }
        assert!(sun_graph(&t, 3, 1).is_err());
        let zero = sun_graph(&t, 4, 0).unwrap();
        assert_eq!(zero.graph, glue_cycle(&vec![t; 4]).unwrap().graph);
    }

    #[test]
    fn cut_vertices_and_triangles() {
        let bowtie = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(bowtie.cut_vertices(), vec![2]);
        assert!(bowtie.every_edge_in_triangle());
        assert!(!Graph::cycle(4).every_edge_in_triangle());
        let k4 = Graph::complete(4);
        assert!(k4.has_triangle_in(&k4.common_neighbors(0, 0)));
    }
}
