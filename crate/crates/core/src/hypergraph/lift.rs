//! Lifting hyperpaths in `H_q^r` to graph paths in `H(q)`.

use std::collections::HashSet;

use super::HyperPath;
use crate::bookpile::StandardCopy;
use crate::coords::LabeledVertex;
use crate::error::{input, Error, Result};
use crate::graph::Graph;

/// Replaces every hyperedge step `v_j e v_(j+1)` by a shortest path from
/// `v_j` to `v_(j+1)` inside the standard copy named by `e`.
///
/// `labels[x]` must be the coordinate label of `H(q)` vertex `x`.
pub fn lift_paths(
    h: &Graph,
    hq: &Graph,
    labels: &[LabeledVertex],
    copies: &[StandardCopy],
    paths: &[HyperPath],
) -> Result<Vec<Vec<usize>>> {
    if !h.is_connected() {
        return input("lifting needs a connected H");
    }
    let q = labels.iter().flat_map(|l| l.coords()).copied().max().unwrap_or(1).max(1);
    let id_of = |l: &LabeledVertex| -> Result<usize> {
        let i = l.index(q);
        match labels.get(i) {
            Some(x) if x == l => Ok(i),
            _ => labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::Structural(format!("{l} is not a vertex of H(q)"))),
        }
    };
    paths
        .iter()
        .map(|p| {
            let mut out = vec![id_of(p.start())?];
            for (j, e) in p.edges.iter().enumerate() {
                let copy = copies
                    .get(e.index(q))
                    .filter(|c| c.edge == e.coords())
                    .or_else(|| copies.iter().find(|c| c.edge == e.coords()))
                    .ok_or_else(|| Error::Structural(format!("no standard copy for {e}")))?;
                let (a, b) = (p.vertices[j].alpha_bit(), p.vertices[j + 1].alpha_bit());
                let inside = h.shortest_path(a, b).expect("H is connected");
                for w in inside.windows(2) {
                    let (x, y) = (copy.vertex_map[w[0]], copy.vertex_map[w[1]]);
                    if !hq.has_edge(x, y) {
                        return Err(Error::Contradiction(format!("copy {e} lacks the edge ({x},{y})")));
                    }
                }
                debug_assert_eq!(copy.vertex_map[a], *out.last().unwrap());
                out.extend(inside[1..].iter().map(|&w| copy.vertex_map[w]));
            }
            Ok(out)
        })
        .collect()
}

/// True iff every path is a simple `u`–`v` path in `g` and the paths share
/// no vertex other than `u` and `v` (at most one may be the direct edge).
pub fn validate_graph_paths(g: &Graph, paths: &[Vec<usize>], u: usize, v: usize) -> bool {
    let mut interior = HashSet::new();
    let mut direct = 0;
    for p in paths {
        if p.len() < 2 || p[0] != u || *p.last().unwrap() != v {
            return false;
        }
        if !p.windows(2).all(|w| g.has_edge(w[0], w[1])) {
            return false;
        }
        if p.len() == 2 {
            direct += 1;
        }
        for &x in &p[1..p.len() - 1] {
            if x == u || x == v || !interior.insert(x) {
                return false;
            }
        }
    }
    direct <= 1
}
