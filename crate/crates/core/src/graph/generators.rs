//! Standard graph families.

use super::Graph;
use crate::error::{input, Result};

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::new(n, edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// Path on `n` vertices (`n - 1` edges).
pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
    Graph::new(a + b, edges).unwrap()
}

pub fn star(leaves: usize) -> Graph {
    complete_bipartite(1, leaves)
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner)).unwrap()
}

/// The `d`-dimensional hypercube `Q_d` on bit strings of length `d`.
pub fn hypercube(d: usize) -> Graph {
    let n = 1usize << d;
    let edges = (0..n).flat_map(|x| (0..d).filter(move |&b| x & (1 << b) == 0).map(move |b| (x, x | (1 << b))));
    Graph::new(n, edges).unwrap()
}

/// Line graph: one vertex per edge of `g` (in `g.edges()` order), adjacent when the edges meet.
pub fn line_graph(g: &Graph) -> Graph {
    let m = g.edge_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push(i);
        incident[v].push(i);
    }
    let mut edges = Vec::new();
    for list in &incident {
        for (a, &i) in list.iter().enumerate() {
            for &j in &list[a + 1..] {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edge_set(m, edges).unwrap()
}

/// Cartesian product; vertex `(x, y)` gets id `x * h.n() + y`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let nh = h.n();
    let mut edges = Vec::new();
    for x in 0..g.n() {
        for &(a, b) in h.edges() {
            edges.push((x * nh + a, x * nh + b));
        }
    }
    for &(a, b) in g.edges() {
        for y in 0..nh {
            edges.push((a * nh + y, b * nh + y));
        }
    }
    Graph::new(g.n() * nh, edges).unwrap()
}

/// `K_q^d`: `d`-tuples over `0..q` (mixed radix, first coordinate most
/// significant), adjacent iff they differ in exactly one coordinate.
pub fn hamming(q: usize, d: usize) -> Graph {
    (1..d).fold(complete(q), |acc, _| cartesian_product(&acc, &complete(q)))
}

/// Resolves a built-in generator name such as `k3`, `c5`, `p4`, `k3,3`,
/// `petersen` or `q3` (the leading `gen:` is optional).
pub fn from_name(name: &str) -> Result<Graph> {
    let spec = name.strip_prefix("gen:").unwrap_or(name).to_ascii_lowercase();
    let num = |s: &str| -> Result<usize> {
        s.parse::<usize>().or_else(|_| input(format!("bad number '{s}' in generator '{name}'")))
    };
    if spec == "petersen" {
        return Ok(petersen());
    }
    let (kind, rest) = spec.split_at(1.min(spec.len()));
    match kind {
        "k" => match rest.split_once([',', '_', 'x']) {
            Some((a, b)) => Ok(complete_bipartite(num(a)?, num(b)?)),
            None => Ok(complete(num(rest)?)),
        },
        "c" => {
            let n = num(rest)?;
            if n < 3 {
                return input("cycles need at least 3 vertices");
            }
            Ok(cycle(n))
        }
        "p" => Ok(path(num(rest)?)),
        "q" => Ok(hypercube(num(rest)?)),
        "s" => Ok(star(num(rest)?)),
        _ => input(format!("unknown generator '{name}'")),
    }
}
