//! Unit-capacity vertex-split max-flow: local and global vertex connectivity
//! and constructive Menger paths between vertex sets.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::Graph;
use crate::error::{input, Result};

const INF: u32 = u32::MAX / 4;

#[derive(Clone, Copy)]
struct Arc {
    to: usize,
    cap: u32,
    orig: u32,
    rev: usize,
}

/// Dinic's algorithm over a small residual network.
struct FlowNet {
    arcs: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet { arcs: vec![Vec::new(); nodes], level: vec![0; nodes], iter: vec![0; nodes] }
    }

    fn add(&mut self, from: usize, to: usize, cap: u32) {
        let rf = self.arcs[to].len();
        let rt = self.arcs[from].len();
        self.arcs[from].push(Arc { to, cap, orig: cap, rev: rf });
        self.arcs[to].push(Arc { to: from, cap: 0, orig: 0, rev: rt });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for a in &self.arcs[x] {
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[x] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, x: usize, t: usize, pushed: u32) -> u32 {
        if x == t {
            return pushed;
        }
        while self.iter[x] < self.arcs[x].len() {
            let a = self.arcs[x][self.iter[x]];
            if a.cap > 0 && self.level[a.to] == self.level[x] + 1 {
                let d = self.dfs(a.to, t, pushed.min(a.cap));
                if d > 0 {
                    self.arcs[x][self.iter[x]].cap -= d;
                    self.arcs[a.to][a.rev].cap += d;
                    return d;
                }
            }
            self.iter[x] += 1;
        }
        0
    }

    /// Max flow from `s` to `t`, stopping early once `limit` is reached.
    fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let mut flow = 0;
        while flow < limit && self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, limit - flow);
                if f == 0 {
                    break;
                }
                flow += f;
                if flow >= limit {
                    break;
                }
            }
        }
        flow
    }
}

fn split_network(g: &Graph, unbounded: &[usize], extra: usize) -> FlowNet {
    let mut net = FlowNet::new(2 * g.n() + extra);
    for v in 0..g.n() {
        let cap = if unbounded.contains(&v) { INF } else { 1 };
        net.add(2 * v, 2 * v + 1, cap);
    }
    for &(u, v) in g.edges() {
        net.add(2 * u + 1, 2 * v, INF);
        net.add(2 * v + 1, 2 * u, INF);
    }
    net
}

/// Maximum number of internally vertex-disjoint `s`–`t` paths for
/// non-adjacent `s != t`, capped at `limit`.
pub fn local_connectivity(g: &Graph, s: usize, t: usize, limit: usize) -> usize {
    debug_assert!(s != t && !g.has_edge(s, t));
    let mut net = split_network(g, &[s, t], 0);
    net.max_flow(2 * s + 1, 2 * t, limit.min(INF as usize) as u32) as usize
}

/// Vertex connectivity κ(g), with κ(K_n) = n − 1.
///
/// Uses the classical reduction: if `S` is a minimum cut, some vertex among
/// the first `κ + 1` ids lies outside `S`, and it is separated from a
/// later-indexed non-neighbour. So only sources `i <= best` are tried.
pub fn vertex_connectivity(g: &Graph) -> Result<usize> {
    connectivity_impl(g, false)
}

/// Same as [`vertex_connectivity`] with the target loop spread over the rayon pool.
pub fn vertex_connectivity_par(g: &Graph) -> Result<usize> {
    connectivity_impl(g, true)
}

fn connectivity_impl(g: &Graph, parallel: bool) -> Result<usize> {
    let n = g.n();
    if n < 2 {
        return input("vertex connectivity needs at least 2 vertices");
    }
    let mut best = n - 1;
    let mut i = 0;
    while i < n && i <= best {
        let targets: Vec<usize> = (i + 1..n).filter(|&j| !g.has_edge(i, j)).collect();
        let local = |j: &usize| local_connectivity(g, i, *j, best);
        let m = if parallel { targets.par_iter().map(local).min() } else { targets.iter().map(local).min() };
        if let Some(m) = m {
            best = best.min(m);
        }
        i += 1;
    }
    Ok(best)
}

/// Up to `want` pairwise vertex-disjoint paths from `sources` to `sinks`
/// avoiding every vertex flagged in `blocked`. Each returned path starts in
/// `sources`, ends in `sinks`, and has no other vertex in either set. A
/// vertex in both sets yields a one-vertex path.
pub fn disjoint_set_paths(
    g: &Graph,
    sources: &[usize],
    sinks: &[usize],
    blocked: &[bool],
    want: usize,
) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut is_src = vec![false; n];
    let mut is_dst = vec![false; n];
    sources.iter().for_each(|&v| is_src[v] = true);
    sinks.iter().for_each(|&v| is_dst[v] = true);
    let mut net = FlowNet::new(2 * n + 2);
    let (ss, tt) = (2 * n, 2 * n + 1);
    for v in 0..n {
        if !blocked[v] {
            net.add(2 * v, 2 * v + 1, 1);
        }
    }
    for &(u, v) in g.edges() {
        if !blocked[u] && !blocked[v] {
            net.add(2 * u + 1, 2 * v, 1);
            net.add(2 * v + 1, 2 * u, 1);
        }
    }
    for v in 0..n {
        if is_src[v] && !blocked[v] {
            net.add(ss, 2 * v, 1);
        }
        if is_dst[v] && !blocked[v] {
            net.add(2 * v + 1, tt, 1);
        }
    }
    let flow = net.max_flow(ss, tt, want as u32) as usize;

    // Decompose: follow saturated forward arcs from the super source.
    let mut paths = Vec::with_capacity(flow);
    let used = |net: &FlowNet, x: usize, k: usize| {
        let a = net.arcs[x][k];
        a.orig > a.cap
    };
    for k in 0..net.arcs[ss].len() {
        if !used(&net, ss, k) {
            continue;
        }
        let mut node = net.arcs[ss][k].to;
        let mut walk = Vec::new();
        loop {
            let v = node / 2;
            walk.push(v);
            // in-node -> out-node
            let out = 2 * v + 1;
            let next = (0..net.arcs[out].len()).find(|&k| {
                let a = net.arcs[out][k];
                used(&net, out, k) && (a.to == tt || a.to < 2 * n)
            });
            match next {
                Some(k) if net.arcs[out][k].to == tt => break,
                Some(k) => {
                    // consume this unit so a later walk does not reuse the arc
                    net.arcs[out][k].cap += 1;
                    node = net.arcs[out][k].to;
                }
                None => unreachable!("flow conservation violated"),
            }
        }
        // Trim to a genuine set-to-set path: last source, then first sink after it.
        let a = walk.iter().rposition(|&v| is_src[v]).unwrap();
        let b = a + walk[a..].iter().position(|&v| is_dst[v]).unwrap();
        paths.push(walk[a..=b].to_vec());
    }
    paths
}

#[cfg(test)]
mod tests {
    use super::super::generators::*;
    use super::*;

    #[test]
    fn small_families() {
        assert_eq!(vertex_connectivity(&complete_bipartite(3, 3)).unwrap(), 3);
        assert_eq!(vertex_connectivity(&path(4)).unwrap(), 1);
        assert_eq!(vertex_connectivity(&complete(5)).unwrap(), 4);
        assert_eq!(vertex_connectivity(&cycle(6)).unwrap(), 2);
        assert_eq!(vertex_connectivity(&Graph::empty(3)).unwrap(), 0);
        assert!(vertex_connectivity(&Graph::empty(1)).is_err());
        assert_eq!(vertex_connectivity_par(&petersen()).unwrap(), 3);
    }

    #[test]
    fn set_paths_are_disjoint() {
        let g = hamming(3, 2);
        let blocked = vec![false; 9];
        let paths = disjoint_set_paths(&g, &[0, 1, 2], &[6, 7, 8], &blocked, 3);
        assert_eq!(paths.len(), 3);
        let mut seen = std::collections::HashSet::new();
        for p in &paths {
            assert!([0, 1, 2].contains(&p[0]) && [6, 7, 8].contains(p.last().unwrap()));
            for w in p.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
            }
            for &v in p {
                assert!(seen.insert(v));
            }
        }
    }

    #[test]
    fn set_paths_shared_vertex_is_trivial() {
        let g = path(3);
        let paths = disjoint_set_paths(&g, &[1], &[1], &[false; 3], 1);
        assert_eq!(paths, vec![vec![1]]);
    }
}
