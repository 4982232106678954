//! Edge-list text format: an `n m` header (a third token `directed` marks
//! a directed weighted target), then `m` lines `u v` or `u v w` with
//! 0-indexed vertices, then an optional `root a b` line. Blank lines and
//! `#` comments are ignored.

use super::{EdgeRootedGraph, Graph, WeightedGraph};
use crate::error::{Error, Result};
use crate::linalg::io::TextScalar;

struct Parsed<'a> {
    n: usize,
    directed: bool,
    edges: Vec<(usize, usize, Option<&'a str>)>,
    root: Option<(usize, usize)>,
}

fn index(tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::Parse(format!("bad vertex index '{tok}'")))
}

fn parse(text: &str) -> Result<Parsed<'_>> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::Parse("missing 'n m' header".into()))?
        .split_whitespace()
        .collect();
    let (n, m, directed) = match header.as_slice() {
        [n, m] => (index(n)?, index(m)?, false),
        [n, m, "directed"] => (index(n)?, index(m)?, true),
        _ => return Err(Error::Parse("header must be 'n m' or 'n m directed'".into())),
    };
    let mut edges = Vec::with_capacity(m);
    let mut root = None;
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["root", a, b] if root.is_none() => root = Some((index(a)?, index(b)?)),
            [u, v] if root.is_none() => edges.push((index(u)?, index(v)?, None)),
            [u, v, w] if root.is_none() => edges.push((index(u)?, index(v)?, Some(*w))),
            _ => return Err(Error::Parse(format!("unexpected line '{line}'"))),
        }
    }
    if edges.len() != m {
        return Err(Error::Parse(format!("header announces {m} edges, found {}", edges.len())));
    }
    if let Some(&(u, v, _)) = edges.iter().find(|&&(u, v, _)| u >= n || v >= n) {
        return Err(Error::Parse(format!("edge ({u},{v}) out of range for n = {n}")));
    }
    Ok(Parsed {
        n,
        directed,
        edges,
        root,
    })
}

/// Parses an unweighted simple graph and its optional root.
pub fn parse_graph(text: &str) -> Result<(Graph, Option<(usize, usize)>)> {
    let p = parse(text)?;
    if p.directed || p.edges.iter().any(|e| e.2.is_some()) {
        return Err(Error::Parse("expected an unweighted undirected graph".into()));
    }
    let mut g = Graph::empty(p.n);
    for (u, v, _) in p.edges {
        g.add_edge(u, v)?;
    }
    Ok((g, p.root))
}

pub fn parse_rooted(text: &str) -> Result<EdgeRootedGraph> {
    let (g, root) = parse_graph(text)?;
    let (a, b) = root.ok_or_else(|| Error::Parse("missing 'root a b' line".into()))?;
    EdgeRootedGraph::new(g, a, b)
}

pub fn format_graph(g: &Graph, root: Option<(usize, usize)>) -> String {
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    if let Some((a, b)) = root {
        out.push_str(&format!("root {a} {b}\n"));
    }
    out
}

pub fn format_rooted(f: &EdgeRootedGraph) -> String {
    format_graph(&f.graph, Some((f.a, f.b)))
}

/// Parses a weighted target. Lines without a weight get weight one; for
/// undirected targets each line sets both orientations.
pub fn parse_weighted<T: TextScalar>(text: &str) -> Result<WeightedGraph<T>> {
    let p = parse(text)?;
    let mut h = WeightedGraph::empty(p.n, p.directed);
    for (u, v, w) in p.edges {
        let w = match w {
            Some(t) => T::parse_text(t)?,
            None => T::one(),
        };
        h.set_weight(u, v, w);
    }
    Ok(h)
}

/// Non-zero weights, one line per unordered pair (ordered for directed
/// targets), loops included.
pub fn format_weighted<T: TextScalar>(h: &WeightedGraph<T>) -> String {
    let n = h.n();
    let mut lines = Vec::new();
    for u in 0..n {
        let start = if h.is_directed() { 0 } else { u };
        for v in start..n {
            let w = h.weight(u, v);
            if !w.is_zero() {
                lines.push(format!("{u} {v} {}", w.format_text()));
            }
        }
    }
    let tag = if h.is_directed() { " directed" } else { "" };
    format!("{n} {}{tag}\n{}\n", lines.len(), lines.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    #[test]
    fn rooted_round_trip() {
        let f = EdgeRootedGraph::triangle().transposed();
        assert_eq!(parse_rooted(&format_rooted(&f)).unwrap(), f);
    }

    #[test]
    fn weighted_round_trip() {
        let text = "3 3 directed\n0 1 1/2\n1 1 -3\n2 0\n";
        let h = parse_weighted::<BigRational>(text).unwrap();
        assert!(h.is_directed());
        assert_eq!(h.weight(1, 1), &BigRational::from_integer((-3).into()));
        assert!(h.weight(1, 0).is_zero());
        assert_eq!(parse_weighted::<BigRational>(&format_weighted(&h)).unwrap(), h);
        let u = parse_weighted::<f64>("2 1\n0 1 0.25\n").unwrap();
        assert_eq!(*u.weight(1, 0), 0.25);
    }

    #[test]
    fn malformed_edge_lists() {
        assert!(parse_graph("3 2\n0 1\n").is_err());
        assert!(parse_graph("3 1\n0 5\n").is_err());
        assert!(parse_graph("3 1\n0 0\n").is_err());
        assert!(parse_rooted("3 1\n0 1\nroot 0 2\n").is_err());
        assert!(parse_graph("3 1\nroot 0 1\n0 1\n").is_err());
    }
}
