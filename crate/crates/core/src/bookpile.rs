//! The q-book operation and the iterated q-bookpile `H(q)` with its
//! coordinate labelling and standard copies.

use serde::{Deserialize, Serialize};

use crate::coords::{HyperEdge, LabeledVertex, ALPHA};
use crate::error::{capacity, input, Error, Result};
use crate::graph::{is_independent, Graph, VertexSet};

/// Default cap on `r·q^(r-1)` for a bookpile construction.
pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

/// `q` copies of `h` glued along the independent set `iset`.
pub fn q_book(h: &Graph, iset: &VertexSet, q: usize) -> Result<Graph> {
    Ok(q_book_with_map(h, iset, q)?.0)
}

/// Also returns `map[c][x]`: the id of copy `c` of vertex `x`.
/// Identified vertices keep one id, assigned at their first appearance.
pub fn q_book_with_map(h: &Graph, iset: &VertexSet, q: usize) -> Result<(Graph, Vec<Vec<usize>>)> {
    if q == 0 {
        return input("q must be positive");
    }
    if !is_independent(h, iset)? {
        return input("the glued vertex set must be independent");
    }
    let n = h.n();
    let mut map = vec![vec![0; n]; q];
    let mut next = 0;
    for c in 0..q {
        for x in 0..n {
            map[c][x] = if c > 0 && iset.contains(x) {
                map[0][x]
            } else {
                next += 1;
                next - 1
            };
        }
    }
    let edges = (0..q).flat_map(|c| h.edges().iter().map(move |&(u, v)| (u, v, c)));
    let g = Graph::new(next, edges.map(|(u, v, c)| (map[c][u], map[c][v])))?;
    Ok((g, map))
}

/// One of the `q^r` edge-disjoint copies of `H` inside `H(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardCopy {
    /// The element of `[q]^r` naming the copy.
    pub edge: Vec<u32>,
    /// `vertex_map[j]` is the `H(q)` vertex playing the role of `v_j`.
    pub vertex_map: Vec<usize>,
}

impl StandardCopy {
    pub fn hyperedge(&self) -> HyperEdge {
        HyperEdge(self.edge.clone())
    }
}

/// `H(q)` together with its labelling and standard copies.
///
/// Vertex ids are canonical: the vertex labelled `v` has id `v.index(q)`.
#[derive(Clone, Debug)]
pub struct Bookpile {
    pub graph: Graph,
    pub labels: Vec<LabeledVertex>,
    pub copies: Vec<StandardCopy>,
    pub q: u32,
    pub r: usize,
}

/// Predicted vertex count `r·q^(r-1)`, or `None` on overflow.
pub fn bookpile_vertex_count(r: usize, q: usize) -> Option<usize> {
    if r == 0 {
        return Some(0);
    }
    q.checked_pow(u32::try_from(r - 1).ok()?)?.checked_mul(r)
}

pub fn bookpile(h: &Graph, q: usize) -> Result<Bookpile> {
    let order: Vec<usize> = (0..h.n()).collect();
    bookpile_with(h, q, &order, DEFAULT_VERTEX_CAP)
}

/// Runs the iteration over the vertices of `h` in `order`.
///
/// Coordinate `x` of a label always refers to original vertex `x`, so the
/// labelled result does not depend on `order`.
pub fn bookpile_with(h: &Graph, q: usize, order: &[usize], vertex_cap: usize) -> Result<Bookpile> {
    let r = h.n();
    if r == 0 {
        return input("H must have at least one vertex");
    }
    if q == 0 {
        return input("q must be positive");
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..r).collect::<Vec<_>>() {
        return input("vertex order must be a permutation of 0..r");
    }
    let total = bookpile_vertex_count(r, q).filter(|&t| t <= vertex_cap);
    let Some(total) = total else {
        return capacity(format!("H(q) would exceed the cap of {vertex_cap} vertices (r={r}, q={q})"));
    };
    let qc = u32::try_from(q).map_err(|_| Error::Capacity("q too large".into()))?;

    // Partial labels: None = not yet assigned.
    let mut g = h.clone();
    let mut origin: Vec<usize> = (0..r).collect();
    let mut partial: Vec<Vec<Option<u32>>> = (0..r)
        .map(|x| {
            let mut c = vec![None; r];
            c[x] = Some(ALPHA);
            c
        })
        .collect();

    for &x in order {
        let clones = VertexSet::new((0..g.n()).filter(|&w| origin[w] == x));
        let (next, map) = q_book_with_map(&g, &clones, q)?;
        let mut next_origin = vec![0; next.n()];
        let mut next_partial = vec![Vec::new(); next.n()];
        for (c, row) in map.iter().enumerate() {
            for (w, &id) in row.iter().enumerate() {
                next_origin[id] = origin[w];
                let mut lab = partial[w].clone();
                if origin[w] != x {
                    lab[x] = Some(c as u32 + 1);
                }
                next_partial[id] = lab;
            }
        }
        g = next;
        origin = next_origin;
        partial = next_partial;
    }
    debug_assert_eq!(g.n(), total);

    let labels: Vec<LabeledVertex> = partial
        .into_iter()
        .map(|c| LabeledVertex::new(c.into_iter().map(|x| x.expect("all coordinates set")).collect()))
        .collect::<Result<_>>()?;
    let perm: Vec<usize> = labels.iter().map(|l| l.index(qc)).collect();
    let graph = g.with_labels(labels.iter().map(ToString::to_string).collect())?.permuted(&perm);
    let mut canonical = vec![None; total];
    for l in labels {
        let i = l.index(qc);
        canonical[i] = Some(l);
    }
    let labels: Vec<LabeledVertex> = canonical.into_iter().map(Option::unwrap).collect();

    let edge_count = q.pow(r as u32);
    let copies = (0..edge_count)
        .map(|i| {
            let e = HyperEdge::from_index(qc, r, i);
            let vertex_map = e.vertices().map(|v| v.index(qc)).collect();
            StandardCopy { edge: e.0, vertex_map }
        })
        .collect();
    Ok(Bookpile { graph, labels, copies, q: qc, r })
}

/// Parses the coordinate labels carried by a bookpile graph.
pub fn parse_labels(hq: &Graph) -> Result<Vec<LabeledVertex>> {
    let Some(labels) = hq.labels() else {
        return input("graph carries no coordinate labels");
    };
    labels.iter().map(|s| s.parse()).collect()
}

/// True iff sending each vertex of `hq` to its α-bit is a homomorphism `H(q) -> H`.
pub fn verify_clone_coloring(h: &Graph, hq: &Graph) -> Result<bool> {
    let labels = parse_labels(hq)?;
    if labels.iter().any(|l| l.r() != h.n()) {
        return input("label length differs from |V(H)|");
    }
    Ok(hq.edges().iter().all(|&(a, b)| h.has_edge(labels[a].alpha_bit(), labels[b].alpha_bit())))
}

/// Checks that the copies partition `E(hq)` and each maps `h` onto an
/// induced copy through its vertex map. Returns a description of the first
/// violation.
pub fn check_standard_copies(h: &Graph, hq: &Graph, copies: &[StandardCopy]) -> std::result::Result<(), String> {
    let mut owner = std::collections::HashMap::new();
    for (ci, copy) in copies.iter().enumerate() {
        if copy.vertex_map.len() != h.n() {
            return Err(format!("copy {ci} has a vertex map of the wrong length"));
        }
        let image = &copy.vertex_map;
        for a in 0..h.n() {
            for b in a + 1..h.n() {
                if h.has_edge(a, b) != hq.has_edge(image[a], image[b]) {
                    return Err(format!("copy {ci} is not an induced copy at ({a},{b})"));
                }
                if h.has_edge(a, b) {
                    let key = (image[a].min(image[b]), image[a].max(image[b]));
                    if let Some(prev) = owner.insert(key, ci) {
                        return Err(format!("edge {key:?} lies in copies {prev} and {ci}"));
                    }
                }
            }
        }
    }
    if owner.len() != hq.edge_count() {
        return Err(format!("copies cover {} of {} edges", owner.len(), hq.edge_count()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use crate::graph::{are_isomorphic, girth};

    #[test]
    fn q_book_examples() {
        let s = q_book(&complete(2), &VertexSet::new([0]), 3).unwrap();
        assert!(are_isomorphic(&s, &star(3)).unwrap());
        let bowtie = q_book(&complete(3), &VertexSet::new([0]), 2).unwrap();
        assert_eq!((bowtie.n(), bowtie.edge_count()), (5, 6));
        assert_eq!(bowtie.degree(0), 4);
        let k24 = q_book(&cycle(4), &VertexSet::new([0, 2]), 2).unwrap();
        assert!(are_isomorphic(&k24, &complete_bipartite(2, 4)).unwrap());
        assert!(q_book(&complete(3), &VertexSet::new([0, 1]), 2).is_err());
        assert!(q_book(&complete(3), &VertexSet::new([0]), 0).is_err());
    }

    #[test]
    fn bookpile_examples() {
        let k33 = bookpile(&complete(2), 3).unwrap();
        assert!(are_isomorphic(&k33.graph, &complete_bipartite(3, 3)).unwrap());
        let lq3 = bookpile(&complete(3), 2).unwrap();
        assert_eq!((lq3.graph.n(), lq3.graph.edge_count()), (12, 24));
        assert!(are_isomorphic(&lq3.graph, &line_graph(&hypercube(3))).unwrap());
        let p = petersen();
        let same = bookpile(&p, 1).unwrap();
        assert!(are_isomorphic(&same.graph, &p).unwrap());
        assert!(same.labels.iter().all(|l| l.coords().iter().all(|&c| c <= 1)));
    }

    #[test]
    fn labels_are_canonical() {
        let b = bookpile(&cycle(5), 2).unwrap();
        for (i, l) in b.labels.iter().enumerate() {
            assert_eq!(l.index(2), i);
            assert_eq!(b.graph.labels().unwrap()[i], l.to_string());
        }
        check_standard_copies(&cycle(5), &b.graph, &b.copies).unwrap();
    }

    #[test]
    fn clone_coloring_and_girth() {
        for (h, q) in [(complete(3), 2), (cycle(5), 2), (complete(2), 5)] {
            let b = bookpile(&h, q).unwrap();
            assert!(verify_clone_coloring(&h, &b.graph).unwrap());
            assert_eq!(girth(&b.graph).map(|g| g <= 4), Some(true));
        }
        assert!(verify_clone_coloring(&complete(3), &complete(3)).is_err());
    }

    #[test]
    fn vertex_cap() {
        let err = bookpile_with(&complete(6), 20, &[0, 1, 2, 3, 4, 5], DEFAULT_VERTEX_CAP);
        assert!(matches!(err, Err(Error::Capacity(_))));
        assert_eq!(bookpile_vertex_count(3, 9), Some(243));
    }

    #[test]
    fn broken_copy_is_reported() {
        let h = complete(3);
        let mut b = bookpile(&h, 2).unwrap();
        b.copies[0].vertex_map[0] = b.copies[5].vertex_map[1];
        assert!(check_standard_copies(&h, &b.graph, &b.copies).is_err());
    }
}
