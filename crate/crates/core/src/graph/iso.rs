use super::Graph;
use crate::error::{capacity, Result};

pub const ISOMORPHISM_LIMIT: usize = 64;

pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool> {
    Ok(find_isomorphism(g1, g2)?.is_some())
}

/// An edge-preserving bijection `g1 -> g2` as `map[v1] = v2`, if one exists.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Result<Option<Vec<usize>>> {
    let n = g1.n();
    if n.max(g2.n()) > ISOMORPHISM_LIMIT {
        return capacity(format!("isomorphism test limited to {ISOMORPHISM_LIMIT} vertices"));
    }
    if n != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let inv1 = invariants(g1);
    let inv2 = invariants(g2);
    let mut s1 = inv1.clone();
    let mut s2 = inv2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Ok(None);
    }
    let order = search_order(g1);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let ctx = Ctx { g1, g2, inv1: &inv1, inv2: &inv2, order: &order };
    Ok(ctx.extend(0, &mut map, &mut used).then_some(map))
}

/// Degree plus the sorted multiset of neighbour degrees.
fn invariants(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    (0..g.n())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&u| g.degree(u)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect()
}

/// Greedy order that keeps each new vertex adjacent to as many placed ones as possible.
fn search_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !placed[v]).max_by_key(|&v| (links[v], g.degree(v), std::cmp::Reverse(v))).unwrap();
        placed[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            links[u] += 1;
        }
    }
    order
}

struct Ctx<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    inv1: &'a [(usize, Vec<usize>)],
    inv2: &'a [(usize, Vec<usize>)],
    order: &'a [usize],
}

impl Ctx<'_> {
    fn extend(&self, depth: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for w in 0..self.g2.n() {
            if used[w] || self.inv1[v] != self.inv2[w] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&u| self.g1.has_edge(u, v) == self.g2.has_edge(map[u], w));
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if self.extend(depth + 1, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
}
