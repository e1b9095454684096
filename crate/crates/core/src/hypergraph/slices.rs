//! Slices `H_i = H_q^r[W_i ∪ U_r]` and disjoint `U`–`V` path systems
//! routed through distinct slices.

use std::collections::HashSet;

use super::{BookpileHypergraph, HyperPath};
use crate::coords::{HyperEdge, LabeledVertex, ALPHA};
use crate::error::{input, Error, Result};
use crate::graph::{disjoint_set_paths, Graph};

/// `W_i` (last coordinate `i`) and `U_r` (α in the last position).
#[derive(Clone, Debug)]
pub struct SliceView {
    pub i: u32,
    pub w: Vec<LabeledVertex>,
    pub u: Vec<LabeledVertex>,
}

impl SliceView {
    pub fn new(hg: &BookpileHypergraph, i: u32) -> Self {
        let last = hg.r() - 1;
        let (mut w, mut u) = (Vec::new(), Vec::new());
        for v in hg.vertices() {
            if v.alpha_bit() == last {
                u.push(v);
            } else if v.coords()[last] == i {
                w.push(v);
            }
        }
        SliceView { i, w, u }
    }

    /// Edges of `H_i`: the tuples ending in `i`.
    pub fn edges(&self, hg: &BookpileHypergraph) -> Vec<HyperEdge> {
        (0..hg.edge_count()).map(|e| hg.edge(e)).filter(|e| *e.coords().last().unwrap() == self.i).collect()
    }

    /// Checks that `H_i` is the `r`-extension of `H_q^(r-1)`: dropping the
    /// last coordinate maps `W_i` bijectively onto `V(q,r-1,α)` and the
    /// edges onto `[q]^(r-1)`, and each `U_r` vertex lies in exactly one edge.
    pub fn check_r_extension(&self, hg: &BookpileHypergraph) -> std::result::Result<(), String> {
        let (q, r) = (hg.q(), hg.r());
        let lower: HashSet<LabeledVertex> = self
            .w
            .iter()
            .map(|v| LabeledVertex::new(v.coords()[..r - 1].to_vec()).map_err(|e| e.to_string()))
            .collect::<std::result::Result<_, _>>()?;
        let expected_lower = (r - 1) * (q as usize).pow(r as u32 - 2);
        if lower.len() != self.w.len() || lower.len() != expected_lower {
            return Err(format!("W_{} does not project onto V(q,{},α)", self.i, r - 1));
        }
        let edges = self.edges(hg);
        if edges.len() != (q as usize).pow(r as u32 - 1) {
            return Err(format!("H_{} has {} edges", self.i, edges.len()));
        }
        for e in &edges {
            let members: Vec<_> = e.vertices().collect();
            let ext: Vec<_> = members.iter().filter(|v| v.alpha_bit() == r - 1).collect();
            if ext.len() != 1 || members.iter().filter(|v| v.alpha_bit() != r - 1).any(|v| !self.w.contains(v)) {
                return Err(format!("edge {e} is not an extended (r-1)-edge"));
            }
        }
        for u in &self.u {
            if edges.iter().filter(|e| u.incident(e)).count() != 1 {
                return Err(format!("{u} is not in exactly one edge of H_{}", self.i));
            }
        }
        Ok(())
    }
}

/// Product-graph id of a `U_r` vertex: its first `r-1` coordinates in mixed radix.
pub(super) fn u_id(v: &LabeledVertex, q: u32) -> usize {
    let r = v.r();
    v.coords()[..r - 1].iter().fold(0usize, |acc, &c| acc * q as usize + (c - 1) as usize)
}

pub(super) fn u_vertex(id: usize, q: u32, r: usize) -> LabeledVertex {
    let mut coords = vec![ALPHA; r];
    let mut rest = id;
    for c in coords[..r - 1].iter_mut().rev() {
        *c = (rest % q as usize) as u32 + 1;
        rest /= q as usize;
    }
    LabeledVertex::new(coords).unwrap()
}

/// The unique edge of `H_slice` through the `U_r` vertex `u`.
pub(super) fn slice_edge(u: &LabeledVertex, slice: u32) -> HyperEdge {
    u.fill(slice)
}

/// Graph on `U_r`: `w ~ w'` iff they share a neighbour in `H_i`.
pub fn aux_product_graph_in_slice(hg: &BookpileHypergraph, i: u32) -> Result<Graph> {
    let (q, r) = (hg.q(), hg.r());
    if r < 3 {
        return input("the auxiliary product graph needs r >= 3");
    }
    let n = (q as usize).pow(r as u32 - 1);
    // Each W_i vertex w has q edges in H_i; their U_r vertices are pairwise adjacent.
    let mut edges = Vec::new();
    for w in SliceView::new(hg, i).w {
        let nbrs: Vec<usize> = hg.edges_of(&w).iter().map(|e| u_id(&LabeledVertex::planted(e, r - 1), q)).collect();
        for a in 0..nbrs.len() {
            for b in a + 1..nbrs.len() {
                edges.push((nbrs[a], nbrs[b]));
            }
        }
    }
    Graph::from_edge_set(n, edges)
}

/// The auxiliary graph on `U_r`, isomorphic to `K_q^(r-1)`.
pub fn aux_product_graph(q: usize, r: usize) -> Result<Graph> {
    if r < 3 {
        return input("the auxiliary product graph needs r >= 3");
    }
    aux_product_graph_in_slice(&super::build_hqr(q, r)?, 1)
}

/// A `U`–`V` path system: `(start, end, path)` in hypergraph terms.
pub(super) struct RoutedPath {
    pub start: LabeledVertex,
    pub end: LabeledVertex,
    pub path: HyperPath,
}

/// Disjoint `U`–`V` routing. Vertices of `U ∩ V` become trivial paths
/// first; the remaining `want - trivial` paths come from vertex-disjoint
/// product-graph paths avoiding `blocked`, shortened to induced paths, and
/// are realised in `slices[0]`, `slices[1]`, … in order.
#[allow(clippy::too_many_arguments)]
pub(super) fn route(
    q: u32,
    r: usize,
    product: &Graph,
    us: &[LabeledVertex],
    vs: &[LabeledVertex],
    blocked: &[LabeledVertex],
    want: usize,
    slices: &[u32],
) -> Result<Vec<RoutedPath>> {
    let uid: Vec<usize> = us.iter().map(|v| u_id(v, q)).collect();
    let vid: Vec<usize> = vs.iter().map(|v| u_id(v, q)).collect();
    let shared: Vec<usize> = uid.iter().copied().filter(|x| vid.contains(x)).collect();

    let mut out: Vec<RoutedPath> = shared
        .iter()
        .take(want)
        .map(|&x| {
            let v = u_vertex(x, q, r);
            RoutedPath { start: v.clone(), end: v.clone(), path: HyperPath::trivial(v) }
        })
        .collect();
    let need = want - out.len();
    if need == 0 {
        return Ok(out);
    }
    if need > slices.len() {
        return Err(Error::Contradiction(format!(
            "{need} slice paths requested but only {} slices free",
            slices.len()
        )));
    }
    let mut block = vec![false; product.n()];
    blocked.iter().for_each(|b| block[u_id(b, q)] = true);
    shared.iter().for_each(|&x| block[x] = true);
    let src: Vec<usize> = uid.iter().copied().filter(|x| !shared.contains(x)).collect();
    let dst: Vec<usize> = vid.iter().copied().filter(|x| !shared.contains(x)).collect();
    let found = disjoint_set_paths(product, &src, &dst, &block, need);
    if found.len() < need {
        return Err(Error::Contradiction(format!(
            "only {} of {need} disjoint U-V paths in the product graph",
            found.len()
        )));
    }
    for (p, &slice) in found.into_iter().zip(slices) {
        let p = make_induced(product, p);
        let path = realise(&p, slice, q, r);
        out.push(RoutedPath { start: path.start().clone(), end: path.end().clone(), path });
    }
    Ok(out)
}

/// Repeatedly replaces `x_a … x_b` by the chord `x_a x_b`, shortest span
/// first, until the path is induced.
fn make_induced(g: &Graph, mut p: Vec<usize>) -> Vec<usize> {
    loop {
        let chord = (2..p.len())
            .find_map(|span| (0..p.len() - span).find(|&a| g.has_edge(p[a], p[a + span])).map(|a| (a, a + span)));
        match chord {
            Some((a, b)) => {
                p.drain(a + 1..b);
            }
            None => return p,
        }
    }
}

/// Turns an induced product-graph path `y_0 … y_ℓ` into the hyperpath
/// `y_0 E_0 w_0 E_1 … E_ℓ y_ℓ` inside `H_slice`, where `E_j` is the slice
/// edge through `y_j` and `w_j = E_j ∩ E_(j+1)`.
fn realise(p: &[usize], slice: u32, q: u32, r: usize) -> HyperPath {
    let us: Vec<LabeledVertex> = p.iter().map(|&x| u_vertex(x, q, r)).collect();
    if us.len() == 1 {
        return HyperPath::trivial(us[0].clone());
    }
    let edges: Vec<HyperEdge> = us.iter().map(|u| slice_edge(u, slice)).collect();
    let mut vertices = vec![us[0].clone()];
    for w in edges.windows(2) {
        vertices.push(w[0].meet(&w[1]).expect("consecutive product vertices differ in one coordinate"));
    }
    vertices.push(us.last().unwrap().clone());
    HyperPath { vertices, edges }
}

/// `s` pairwise vertex-disjoint `U`–`V` paths, the `i`-th inside slice `H_i`.
pub fn uv_slice_paths(
    hg: &BookpileHypergraph,
    us: &[LabeledVertex],
    vs: &[LabeledVertex],
    s: usize,
) -> Result<Vec<HyperPath>> {
    let (q, r) = (hg.q() as usize, hg.r());
    if r < 3 {
        return input("U-V slice paths need r >= 3");
    }
    if s == 0 || us.len() < s || vs.len() < s {
        return input(format!("need 1 <= s <= |U|, |V| (s={s}, |U|={}, |V|={})", us.len(), vs.len()));
    }
    if (r - 1) * (q - 1) < q || q < s {
        return input(format!("need (r-1)(q-1) >= q >= s (q={q}, r={r}, s={s})"));
    }
    for x in us.iter().chain(vs) {
        hg.check_vertex(x)?;
        if x.alpha_bit() != r - 1 {
            return input(format!("{x} is not in U_r"));
        }
    }
    let dedup = |xs: &[LabeledVertex]| xs.iter().cloned().collect::<HashSet<_>>().len() == xs.len();
    if !dedup(us) || !dedup(vs) {
        return input("U and V must not repeat vertices");
    }
    let product = aux_product_graph_in_slice(hg, 1)?;
    // trivial paths take the first indices, so path i lands in H_(i+1)
    let trivial = us.iter().filter(|x| vs.contains(x)).count().min(s);
    let slices: Vec<u32> = (trivial as u32 + 1..=s as u32).collect();
    Ok(route(hg.q(), r, &product, us, vs, &[], s, &slices)?.into_iter().map(|p| p.path).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{are_isomorphic, generators, vertex_connectivity};
    use crate::hypergraph::build_hqr;

    fn lv(s: &str) -> LabeledVertex {
        s.parse().unwrap()
    }

    fn in_slice(p: &HyperPath, i: u32, r: usize) -> bool {
        p.edges.iter().all(|e| e.coords()[r - 1] == i)
    }

    #[test]
    fn product_graph_shape() {
        let g = aux_product_graph(3, 3).unwrap();
        assert_eq!((g.n(), g.edge_count()), (9, 18));
        assert!(are_isomorphic(&g, &generators::hamming(3, 2)).unwrap());
        assert_eq!(g, generators::hamming(3, 2));
        assert_eq!(vertex_connectivity(&g).unwrap(), 4);
        let c4 = aux_product_graph(2, 3).unwrap();
        assert!(are_isomorphic(&c4, &generators::cycle(4)).unwrap());
        let hg = build_hqr(3, 4).unwrap();
        let first = aux_product_graph_in_slice(&hg, 1).unwrap();
        for i in 2..=3 {
            assert_eq!(aux_product_graph_in_slice(&hg, i).unwrap(), first);
        }
        assert!(aux_product_graph(3, 2).is_err());
    }

    #[test]
    fn slices_are_r_extensions() {
        for (q, r) in [(2, 3), (3, 3), (2, 4)] {
            let hg = build_hqr(q, r).unwrap();
            for i in 1..=q as u32 {
                SliceView::new(&hg, i).check_r_extension(&hg).unwrap();
            }
        }
    }

    #[test]
    fn single_path_in_first_slice() {
        let hg = build_hqr(3, 3).unwrap();
        let paths = uv_slice_paths(&hg, &[lv("(1,1,α)")], &[lv("(3,3,α)")], 1).unwrap();
        assert_eq!(paths.len(), 1);
        let p = &paths[0];
        p.check(3, 3).unwrap();
        assert!(in_slice(p, 1, 3));
        assert_eq!((p.start(), p.end()), (&lv("(1,1,α)"), &lv("(3,3,α)")));
    }

    #[test]
    fn shared_vertex_gives_trivial_path() {
        let hg = build_hqr(3, 3).unwrap();
        let u = lv("(2,3,α)");
        let paths = uv_slice_paths(&hg, std::slice::from_ref(&u), std::slice::from_ref(&u), 1).unwrap();
        assert_eq!(paths, vec![HyperPath::trivial(u)]);
    }

    #[test]
    fn three_disjoint_paths_q9() {
        let hg = build_hqr(9, 3).unwrap();
        let us = [lv("(1,1,α)"), lv("(2,5,α)"), lv("(7,3,α)")];
        let vs = [lv("(9,9,α)"), lv("(4,8,α)"), lv("(6,2,α)")];
        let paths = uv_slice_paths(&hg, &us, &vs, 3).unwrap();
        for (i, p) in paths.iter().enumerate() {
            p.check(9, 3).unwrap();
            assert!(in_slice(p, i as u32 + 1, 3));
            assert!(us.contains(p.start()) && vs.contains(p.end()));
        }
        for a in 0..3 {
            for b in a + 1..3 {
                let (ca, cb) = (paths[a].covered(), paths[b].covered());
                assert!(ca.is_disjoint(&cb));
            }
        }
    }

    #[test]
    fn precondition_errors() {
        let hg = build_hqr(3, 3).unwrap();
        let u = [lv("(1,1,α)")];
        assert!(uv_slice_paths(&hg, &u, &u, 2).is_err());
        assert!(uv_slice_paths(&hg, &[lv("(α,1,1)")], &u, 1).is_err());
        let hg2 = build_hqr(3, 2).unwrap();
        assert!(uv_slice_paths(&hg2, &[lv("(1,α)")], &[lv("(2,α)")], 1).is_err());
    }

    #[test]
    fn induced_shortening() {
        let g = generators::complete(4);
        assert_eq!(make_induced(&g, vec![0, 1, 2, 3]), vec![0, 3]);
        let p = generators::path(4);
        assert_eq!(make_induced(&p, vec![0, 1, 2, 3]), vec![0, 1, 2, 3]);
    }
}
