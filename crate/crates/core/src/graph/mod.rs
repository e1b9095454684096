//! Simple undirected graphs on dense vertex ids `0..n` and the exact
//! checkers built on top of them.

mod coloring;
mod connectivity;
pub mod generators;
mod girth;
mod io;
mod iso;

pub use coloring::{chromatic_number, chromatic_number_with_limit, is_proper_coloring, CHROMATIC_LIMIT};
pub use connectivity::{disjoint_set_paths, local_connectivity, vertex_connectivity, vertex_connectivity_par};
pub use girth::girth;
pub use io::GraphJson;
pub use iso::{are_isomorphic, find_isomorphism, ISOMORPHISM_LIMIT};

use std::collections::VecDeque;

use crate::error::{input, Result};

/// A simple undirected graph. Edges are stored as `(u, v)` with `u < v`,
/// sorted lexicographically; adjacency lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut norm = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return input(format!("edge ({u},{v}) has an endpoint outside 0..{n}"));
            }
            if u == v {
                return input(format!("self-loop at vertex {u}"));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return input(format!("duplicate edge ({},{})", w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_edges(n, norm))
    }

    /// Collapses duplicates instead of rejecting them. Self-loops are still rejected.
    pub fn from_edge_set(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut norm: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        norm.sort_unstable();
        norm.dedup();
        Self::new(n, norm)
    }

    fn from_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj, labels: None }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return input(format!("{} labels for {} vertices", labels.len(), self.n));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Vertex-disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let edges =
            self.edges.iter().copied().chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift))).collect();
        Self::from_sorted_edges(self.n + other.n, edges)
    }

    /// Subgraph induced on `keep`, renumbered in the order given.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u].min(pos[v]), pos[u].max(pos[v])))
            .collect();
        edges.sort_unstable();
        Self::from_sorted_edges(keep.len(), edges)
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v]));
        let mut g = Self::new(self.n, edges).expect("permutation preserves simplicity");
        if let Some(labels) = &self.labels {
            let mut out = vec![String::new(); self.n];
            for (v, l) in labels.iter().enumerate() {
                out[perm[v]] = l.clone();
            }
            g.labels = Some(out);
        }
        g
    }

    /// BFS distances from `src`, `None` for unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// A shortest path from `src` to `dst` as a vertex sequence, if one exists.
    pub fn shortest_path(&self, src: usize, dst: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.n];
        parent[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            if x == dst {
                break;
            }
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if parent[dst] == usize::MAX {
            return None;
        }
        let mut path = vec![dst];
        let mut cur = dst;
        while cur != src {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Whether `self` is a (not necessarily induced) subgraph of `other` on the same vertex ids.
    pub fn is_spanning_subgraph_of(&self, other: &Graph) -> bool {
        self.n <= other.n && self.edges.iter().all(|&(u, v)| other.has_edge(u, v))
    }
}

/// A sorted set of vertex ids of some host graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<_> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub(crate) fn check_within(&self, g: &Graph) -> Result<()> {
        match self.members.last() {
            Some(&v) if v >= g.n() => input(format!("vertex {v} outside 0..{}", g.n())),
            _ => Ok(()),
        }
    }
}

/// True iff no edge of `g` has both endpoints in `s`.
pub fn is_independent(g: &Graph, s: &VertexSet) -> Result<bool> {
    s.check_within(g)?;
    Ok(!g.edges().iter().any(|&(u, v)| s.contains(u) && s.contains(v)))
}
