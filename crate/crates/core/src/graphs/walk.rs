use std::collections::HashMap;

use super::Graph;

/// Truncated walk-tree: the root stands for the trivial walk, children for
/// one-step extensions. Children are kept sorted, so equality is rooted-tree
/// isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WalkTree {
    pub children: Vec<WalkTree>,
}

impl WalkTree {
    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(WalkTree::size).sum::<usize>()
    }
}

/// Tree of all walks of length at most `depth` starting at `v`.
pub fn walk_tree_truncated(g: &Graph, v: usize, depth: usize) -> WalkTree {
    if depth == 0 {
        return WalkTree { children: Vec::new() };
    }
    let mut children: Vec<WalkTree> = g
        .neighbors(v)
        .iter()
        .map(|&w| walk_tree_truncated(g, w, depth - 1))
        .collect();
    children.sort();
    WalkTree { children }
}

/// A partition of `0..n`, classes numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub label: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_keys<K: Eq + std::hash::Hash>(keys: &[K]) -> Self {
        let mut ids: HashMap<&K, usize> = HashMap::new();
        let mut label = Vec::with_capacity(keys.len());
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (v, k) in keys.iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(k).or_insert(next);
            if id == classes.len() {
                classes.push(Vec::new());
            }
            classes[id].push(v);
            label.push(id);
        }
        Partition { label, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn same_class(&self, u: usize, v: usize) -> bool {
        self.label[u] == self.label[v]
    }
}

/// Colour refinement from the uniform colouring to its fixed point:
/// a vertex's new colour is its old colour with the multiset of its
/// neighbours' colours.
pub fn walk_tree_partition(g: &Graph) -> Partition {
    let n = g.n();
    let mut colour = vec![0usize; n];
    let mut classes = usize::from(n > 0);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut m: Vec<usize> = g.neighbors(v).iter().map(|&w| colour[w]).collect();
                m.sort_unstable();
                (colour[v], m)
            })
            .collect();
        let mut uniq: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
        uniq.sort();
        uniq.dedup();
        colour = sigs
            .iter()
            .map(|s| uniq.binary_search(&s).expect("present"))
            .collect();
        if uniq.len() == classes {
            break;
        }
        classes = uniq.len();
    }
    Partition::from_keys(&colour)
}

/// Classes of isomorphic depth-`depth` walk-trees, computed with
/// hash-consed canonical identifiers rather than explicit trees.
pub fn walk_tree_canonical_partition(g: &Graph, depth: usize) -> Partition {
    let n = g.n();
    let mut intern: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut canon = vec![0usize; n];
    intern.insert(Vec::new(), 0);
    for _ in 0..depth {
        canon = (0..n)
            .map(|v| {
                let mut kids: Vec<usize> = g.neighbors(v).iter().map(|&w| canon[w]).collect();
                kids.sort_unstable();
                let next = intern.len();
                *intern.entry(kids).or_insert(next)
            })
            .collect();
    }
    Partition::from_keys(&canon)
}

/// The multiset `{d(w) : w in N(v)}`, sorted.
pub fn neighborhood_degree_sequence(g: &Graph, v: usize) -> Vec<usize> {
    let mut d: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
    d.sort_unstable();
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_transitive_has_one_class() {
        assert_eq!(walk_tree_partition(&Graph::cycle(5)).len(), 1);
        assert_eq!(walk_tree_partition(&Graph::complete(4)).len(), 1);
    }

    #[test]
    fn star_has_centre_and_leaves() {
        let p = walk_tree_partition(&Graph::star(3));
        assert_eq!(p.classes, vec![vec![0], vec![1, 2, 3]]);
        let g = Graph::star(3);
        assert_eq!(neighborhood_degree_sequence(&g, 0), vec![1, 1, 1]);
        assert_eq!(neighborhood_degree_sequence(&g, 1), vec![3]);
    }

    #[test]
    fn path_classes_by_distance_to_end() {
        let p = walk_tree_partition(&Graph::path(5));
        assert_eq!(p.classes, vec![vec![0, 4], vec![1, 3], vec![2]]);
    }

    #[test]
    fn explicit_trees_agree_with_interning() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap();
        for d in 0..=5 {
            let trees: Vec<WalkTree> = (0..6).map(|v| walk_tree_truncated(&g, v, d)).collect();
            assert_eq!(Partition::from_keys(&trees), walk_tree_canonical_partition(&g, d));
        }
        assert_eq!(walk_tree_truncated(&g, 0, 3).depth(), 3);
    }

    #[test]
    fn disconnected_regular_pieces_merge() {
        let g = Graph::cycle(3).disjoint_union(&Graph::cycle(4));
        assert_eq!(walk_tree_partition(&g).len(), 1);
        assert_eq!(walk_tree_canonical_partition(&g, 14).len(), 1);
    }
}
