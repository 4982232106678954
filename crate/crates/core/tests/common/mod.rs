#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symprod::graphs::{EdgeRootedGraph, Graph, WeightedGraph};
use symprod::word::{Factor, Marker, VarId, Variable, Word};

/// Every word of degree `1..=max_degree` over `A` and `B`, for each choice of
/// which variables are symmetric, up to cyclic shift.
pub fn word_corpus(max_degree: usize) -> Vec<Word> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for pattern in 0..4u8 {
        let sym = [pattern & 1 != 0, pattern & 2 != 0];
        let vars: Vec<Variable> = ["A", "B"]
            .iter()
            .zip(sym)
            .map(|(n, s)| Variable {
                name: n.to_string(),
                symmetric: s,
            })
            .collect();
        let alphabet: Vec<Factor> = (0..2)
            .flat_map(|v| {
                if sym[v] {
                    vec![Factor::new(VarId(v), Marker::Sym)]
                } else {
                    vec![
                        Factor::new(VarId(v), Marker::Plain),
                        Factor::new(VarId(v), Marker::Transpose),
                    ]
                }
            })
            .collect();
        for k in 1..=max_degree {
            let total = alphabet.len().pow(k as u32);
            for code in 0..total {
                let mut c = code;
                let factors: Vec<Factor> = (0..k)
                    .map(|_| {
                        let f = alphabet[c % alphabet.len()];
                        c /= alphabet.len();
                        f
                    })
                    .collect();
                let rot = (0..k)
                    .map(|r| {
                        let mut v: Vec<(usize, Marker)> =
                            factors.iter().map(|f| (f.var.0, f.marker)).collect();
                        v.rotate_left(r);
                        v
                    })
                    .min()
                    .expect("non-empty");
                let used: Vec<bool> = (0..2)
                    .map(|v| sym[v] && factors.iter().any(|f| f.var.0 == v))
                    .collect();
                if seen.insert((rot, used)) {
                    out.push(Word::new(factors, vars.clone()).expect("valid word"));
                }
            }
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-6i64..=6)), BigInt::from(rng.gen_range(1i64..=4)))
}

/// Undirected target with loops and rational weights.
pub fn rational_target(rng: &mut ChaCha8Rng, n: usize) -> WeightedGraph<BigRational> {
    let mut h = WeightedGraph::empty(n, false);
    for u in 0..n {
        for v in u..n {
            h.set_weight(u, v, small_rational(rng));
        }
    }
    h
}

pub fn rational_digraph(rng: &mut ChaCha8Rng, n: usize) -> WeightedGraph<BigRational> {
    let mut h = WeightedGraph::empty(n, true);
    for u in 0..n {
        for v in 0..n {
            h.set_weight(u, v, small_rational(rng));
        }
    }
    h
}

/// Random graph on `n` vertices rooted at the edge `(0, 1)`.
pub fn random_block(rng: &mut ChaCha8Rng, n: usize) -> EdgeRootedGraph {
    let mut g = Graph::empty(n);
    g.add_edge(0, 1).expect("in range");
    for u in 0..n {
        for v in (u + 1)..n {
            if (u, v) != (0, 1) && rng.gen_bool(0.5) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    let (a, b) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
    EdgeRootedGraph::new(g, a, b).expect("root edge present")
}

/// All graphs on `n` labelled vertices, as edge bitmasks over `u < v`.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut bit = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v).expect("in range");
            }
            bit += 1;
        }
    }
    g
}
