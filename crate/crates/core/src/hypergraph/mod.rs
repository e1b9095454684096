//! The `r`-uniform linear hypergraph `H_q^r` on `V(q,r,α)` with edge set
//! `[q]^r`, hyperpaths in it, and the constructive machinery producing
//! internally vertex-disjoint path systems.

mod connect;
mod lift;
mod slices;

pub use connect::{connect, connect_unchecked, threshold_q};
pub use lift::{lift_paths, validate_graph_paths};
pub use slices::{aux_product_graph, aux_product_graph_in_slice, uv_slice_paths, SliceView};

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bookpile::{bookpile_vertex_count, StandardCopy, DEFAULT_VERTEX_CAP};
use crate::coords::{HyperEdge, LabeledVertex};
use crate::error::{capacity, input, Error, Result};
use crate::graph::Graph;

/// `H_q^r`. Vertices and edges are addressed by their dense indices
/// ([`LabeledVertex::index`], [`HyperEdge::index`]).
#[derive(Clone, Debug)]
pub struct BookpileHypergraph {
    q: u32,
    r: usize,
    edge_vertices: Vec<Vec<usize>>,
    /// Auxiliary product graph of `H_q^s` for each `3 <= s <= r`, built on demand.
    products: Vec<OnceLock<Graph>>,
}

pub fn build_hqr(q: usize, r: usize) -> Result<BookpileHypergraph> {
    BookpileHypergraph::new(q, r)
}

impl BookpileHypergraph {
    pub fn new(q: usize, r: usize) -> Result<Self> {
        if q == 0 {
            return input("q must be positive");
        }
        if r < 2 {
            return input("H_q^r needs r >= 2");
        }
        match bookpile_vertex_count(r, q) {
            Some(n) if n <= DEFAULT_VERTEX_CAP => {}
            _ => return capacity(format!("H_{q}^{r} exceeds {DEFAULT_VERTEX_CAP} vertices")),
        }
        let qc = q as u32;
        let edge_vertices = (0..q.pow(r as u32))
            .map(|i| HyperEdge::from_index(qc, r, i).vertices().map(|v| v.index(qc)).collect())
            .collect();
        let products = (0..=r).map(|_| OnceLock::new()).collect();
        Ok(BookpileHypergraph { q: qc, r, edge_vertices, products })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.r * (self.q as usize).pow(self.r as u32 - 1)
    }

    pub fn edge_count(&self) -> usize {
        self.edge_vertices.len()
    }

    pub fn vertex(&self, idx: usize) -> LabeledVertex {
        LabeledVertex::from_index(self.q, self.r, idx)
    }

    pub fn edge(&self, idx: usize) -> HyperEdge {
        HyperEdge::from_index(self.q, self.r, idx)
    }

    pub fn vertices(&self) -> impl Iterator<Item = LabeledVertex> + '_ {
        (0..self.vertex_count()).map(|i| self.vertex(i))
    }

    /// Vertex indices of each edge, indexed by edge index.
    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.edge_vertices
    }

    /// The `q` edges through `v`.
    pub fn edges_of(&self, v: &LabeledVertex) -> Vec<HyperEdge> {
        (1..=self.q).map(|x| v.fill(x)).collect()
    }

    pub fn contains(&self, v: &LabeledVertex) -> bool {
        v.check_range(self.q, self.r).is_ok()
    }

    /// Number of edges containing both `u` and `v`.
    pub fn codegree(&self, u: &LabeledVertex, v: &LabeledVertex) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return input("codegree needs distinct vertices");
        }
        if u.alpha_bit() == v.alpha_bit() {
            return Ok(0);
        }
        Ok(usize::from(u.shares_fixed_bits(v)))
    }

    /// The auxiliary product graph on `U_s` of `H_q^s`, for `3 <= s <= r`.
    pub fn product_graph(&self, s: usize) -> Result<&Graph> {
        if !(3..=self.r).contains(&s) {
            return input(format!("no product graph for uniformity {s}"));
        }
        if let Some(g) = self.products[s].get() {
            return Ok(g);
        }
        let g = if s == self.r {
            aux_product_graph_in_slice(self, 1)?
        } else {
            aux_product_graph_in_slice(&BookpileHypergraph::new(self.q as usize, s)?, 1)?
        };
        Ok(self.products[s].get_or_init(|| g))
    }

    pub(crate) fn check_vertex(&self, v: &LabeledVertex) -> Result<()> {
        v.check_range(self.q, self.r)
    }
}

/// Alternating sequence `v_0 e_1 v_1 … e_ℓ v_ℓ`; `ℓ = 0` is a trivial path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperPath {
    pub vertices: Vec<LabeledVertex>,
    pub edges: Vec<HyperEdge>,
}

/// Vertices shared by two edges of `H_q^r` (all of them when equal).
fn intersection(e: &HyperEdge, f: &HyperEdge) -> Vec<LabeledVertex> {
    if e == f {
        e.vertices().collect()
    } else {
        e.meet(f).into_iter().collect()
    }
}

impl HyperPath {
    pub fn trivial(v: LabeledVertex) -> Self {
        HyperPath { vertices: vec![v], edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> &LabeledVertex {
        &self.vertices[0]
    }

    pub fn end(&self) -> &LabeledVertex {
        self.vertices.last().unwrap()
    }

    pub fn reversed(&self) -> Self {
        let mut p = self.clone();
        p.vertices.reverse();
        p.edges.reverse();
        p
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(mut self, other: &HyperPath) -> Self {
        debug_assert_eq!(self.end(), other.start());
        self.vertices.extend(other.vertices[1..].iter().cloned());
        self.edges.extend(other.edges.iter().cloned());
        self
    }

    /// All vertices covered by the path's edges (the path's vertex set in the hypergraph).
    pub fn covered(&self) -> HashSet<LabeledVertex> {
        let mut s: HashSet<_> = self.edges.iter().flat_map(|e| e.vertices()).collect();
        s.extend(self.vertices.iter().cloned());
        s
    }

    /// Checks the alternating structure inside `H_q^r` and that
    /// non-consecutive edges are disjoint.
    pub fn check(&self, q: u32, r: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::Structural(msg));
        if self.vertices.len() != self.edges.len() + 1 {
            return bad(format!("path has {} vertices but {} edges", self.vertices.len(), self.edges.len()));
        }
        for v in &self.vertices {
            v.check_range(q, r)?;
        }
        for e in &self.edges {
            e.check_range(q, r)?;
        }
        for (i, e) in self.edges.iter().enumerate() {
            let (a, b) = (&self.vertices[i], &self.vertices[i + 1]);
            if a == b || !a.incident(e) || !b.incident(e) {
                return bad(format!("step {i}: {a} and {b} are not distinct members of {e}"));
            }
        }
        for i in 0..self.edges.len() {
            for j in i + 1..self.edges.len() {
                let (e, f) = (&self.edges[i], &self.edges[j]);
                if j == i + 1 && e == f {
                    return bad(format!("edge {e} repeated consecutively"));
                }
                if j >= i + 2 && !intersection(e, f).is_empty() {
                    return bad(format!("non-consecutive edges {e} and {f} intersect"));
                }
            }
        }
        Ok(())
    }
}

/// True iff the paths are pairwise internally vertex-disjoint `u`–`v` paths:
/// first edges meet only in `u`, last edges only in `v`, every other pair of
/// edges is disjoint. Malformed paths are a structural error.
pub fn validate_disjoint(paths: &[HyperPath], u: &LabeledVertex, v: &LabeledVertex, q: u32, r: usize) -> Result<bool> {
    for p in paths {
        p.check(q, r)?;
        if p.start() != u || p.end() != v {
            return Err(Error::Structural(format!("path runs {}..{} instead of {u}..{v}", p.start(), p.end())));
        }
    }
    for (a, p) in paths.iter().enumerate() {
        for p2 in &paths[a + 1..] {
            if !pair_disjoint(p, p2, u, v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn pair_disjoint(p: &HyperPath, p2: &HyperPath, u: &LabeledVertex, v: &LabeledVertex) -> bool {
    let (l, t) = (p.len(), p2.len());
    if l == 0 || t == 0 {
        return false;
    }
    for (i, e) in p.edges.iter().enumerate() {
        for (j, f) in p2.edges.iter().enumerate() {
            if e == f {
                return false;
            }
            let allowed = |x: &LabeledVertex| (i == 0 && j == 0 && x == u) || (i == l - 1 && j == t - 1 && x == v);
            if !intersection(e, f).iter().all(allowed) {
                return false;
            }
        }
    }
    true
}

/// The `r`-graph whose edges are the standard copies, read through the
/// coordinate labels, compared against `H_q^r`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuxHypergraphCheck {
    /// Vertex ids (in `H(q)`) of each standard copy.
    pub edges: Vec<Vec<usize>>,
    pub isomorphic: bool,
    pub mismatch: Option<String>,
}

/// Builds the hypergraph of standard copies, maps every vertex through its
/// label and checks that the result is exactly `H_q^r`.
pub fn aux_hypergraph_of_copies(
    labels: &[LabeledVertex],
    copies: &[StandardCopy],
    q: usize,
    r: usize,
) -> Result<AuxHypergraphCheck> {
    let hg = build_hqr(q, r)?;
    let edges: Vec<Vec<usize>> = copies.iter().map(|c| c.vertex_map.clone()).collect();
    let fail =
        |edges: Vec<Vec<usize>>, msg: String| Ok(AuxHypergraphCheck { edges, isomorphic: false, mismatch: Some(msg) });
    for (ci, c) in copies.iter().enumerate() {
        if c.vertex_map.len() != r || c.edge.len() != r {
            return Err(Error::Structural(format!("copy {ci} does not have {r} vertices")));
        }
        if let Some(&bad) = c.vertex_map.iter().find(|&&x| x >= labels.len()) {
            return Err(Error::Structural(format!("copy {ci} names vertex {bad} without a label")));
        }
    }
    if labels.len() != hg.vertex_count() {
        return fail(edges, format!("{} labelled vertices, expected {}", labels.len(), hg.vertex_count()));
    }
    let distinct: HashSet<&LabeledVertex> = labels.iter().collect();
    if distinct.len() != labels.len() || labels.iter().any(|l| !hg.contains(l)) {
        return fail(edges, "labels are not a bijection onto V(q,r,α)".into());
    }
    let expected: BTreeSet<Vec<LabeledVertex>> = (0..hg.edge_count())
        .map(|i| {
            let mut s: Vec<_> = hg.edge(i).vertices().collect();
            s.sort();
            s
        })
        .collect();
    let mut seen = BTreeSet::new();
    for (ci, c) in copies.iter().enumerate() {
        let mut mapped: Vec<LabeledVertex> = c.vertex_map.iter().map(|&x| labels[x].clone()).collect();
        let claimed = HyperEdge(c.edge.clone());
        if claimed.check_range(hg.q(), r).is_err() || !mapped.iter().all(|l| l.incident(&claimed)) {
            return fail(edges, format!("copy {ci} ({claimed}) disagrees with its vertex labels"));
        }
        mapped.sort();
        if !expected.contains(&mapped) || !seen.insert(mapped) {
            return fail(edges, format!("copy {ci} is not a distinct edge of H_{q}^{r}"));
        }
    }
    if seen.len() != expected.len() {
        return fail(edges, format!("{} copies for {} edges", seen.len(), expected.len()));
    }
    Ok(AuxHypergraphCheck { edges, isomorphic: true, mismatch: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bookpile::bookpile;
    use crate::graph::generators::*;

    fn lv(s: &str) -> LabeledVertex {
        s.parse().unwrap()
    }

    #[test]
    fn counts_and_degrees() {
        let hg = build_hqr(2, 3).unwrap();
        assert_eq!((hg.vertex_count(), hg.edge_count()), (12, 8));
        let mut deg = [0; 12];
        hg.incidence().iter().flatten().for_each(|&v| deg[v] += 1);
        assert!(deg.iter().all(|&d| d == 2));
        let c4 = build_hqr(2, 2).unwrap();
        assert_eq!((c4.vertex_count(), c4.edge_count()), (4, 4));
        assert!(build_hqr(2, 1).is_err());
    }

    #[test]
    fn k33_incidence() {
        let hg = build_hqr(3, 2).unwrap();
        let g = crate::Graph::new(6, hg.incidence().iter().map(|e| (e[0], e[1]))).unwrap();
        assert!(crate::graph::are_isomorphic(&g, &complete_bipartite(3, 3)).unwrap());
    }

    #[test]
    fn codegree_examples() {
        let hg = build_hqr(2, 3).unwrap();
        assert_eq!(hg.codegree(&lv("(α,1,1)"), &lv("(1,α,1)")).unwrap(), 1);
        assert_eq!(hg.codegree(&lv("(α,1,1)"), &lv("(α,2,1)")).unwrap(), 0);
        assert_eq!(hg.codegree(&lv("(α,1,1)"), &lv("(1,1,α)")).unwrap(), 1);
        assert_eq!(hg.codegree(&lv("(α,1,1)"), &lv("(2,2,α)")).unwrap(), 0);
        assert!(hg.codegree(&lv("(α,1,1)"), &lv("(α,1,1)")).is_err());
        assert!(hg.codegree(&lv("(α,1,3)"), &lv("(α,1,1)")).is_err());
    }

    #[test]
    fn path_validation() {
        let (u, v) = (lv("(α,1,1)"), lv("(α,2,2)"));
        // u (1,1,1) (1,α,1) (1,2,1) (1,2,α) (1,2,2) (α,2,2)
        let p = HyperPath {
            vertices: vec![u.clone(), lv("(1,α,1)"), lv("(1,2,α)"), v.clone()],
            edges: vec![HyperEdge(vec![1, 1, 1]), HyperEdge(vec![1, 2, 1]), HyperEdge(vec![1, 2, 2])],
        };
        p.check(2, 3).unwrap();
        assert!(validate_disjoint(std::slice::from_ref(&p), &u, &v, 2, 3).unwrap());
        assert!(!validate_disjoint(&[p.clone(), p.clone()], &u, &v, 2, 3).unwrap());
        let mut broken = p.clone();
        broken.vertices[1] = lv("(2,α,1)");
        assert!(broken.check(2, 3).is_err());
        assert!(validate_disjoint(&[broken], &u, &v, 2, 3).is_err());
    }

    #[test]
    fn aux_hypergraph_matches() {
        for (h, q) in [(complete(3), 2), (complete(2), 3)] {
            let b = bookpile(&h, q).unwrap();
            let check = aux_hypergraph_of_copies(&b.labels, &b.copies, q, h.n()).unwrap();
            assert!(check.isomorphic, "{:?}", check.mismatch);
        }
        let mut b = bookpile(&complete(3), 2).unwrap();
        b.copies[3].edge[1] = 3 - b.copies[3].edge[1];
        let check = aux_hypergraph_of_copies(&b.labels, &b.copies, 2, 3).unwrap();
        assert!(!check.isomorphic);
        assert!(check.mismatch.unwrap().contains("copy 3"));
    }
}
