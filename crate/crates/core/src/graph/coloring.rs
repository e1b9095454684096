use super::Graph;
use crate::error::{capacity, Result};

/// Default vertex limit for the exact chromatic number search.
pub const CHROMATIC_LIMIT: usize = 40;

pub fn chromatic_number(g: &Graph) -> Result<usize> {
    chromatic_number_with_limit(g, CHROMATIC_LIMIT)
}

/// Exact χ(g): iterative k-colourability between a clique lower bound and a
/// greedy upper bound.
pub fn chromatic_number_with_limit(g: &Graph, limit: usize) -> Result<usize> {
    let n = g.n();
    if n > limit {
        return capacity(format!("exact colouring limited to {limit} vertices, got {n}"));
    }
    if n == 0 {
        return Ok(0);
    }
    let upper = greedy_colors(g);
    let mut k = greedy_clique(g).max(1);
    while k < upper {
        if colorable(g, k) {
            return Ok(k);
        }
        k += 1;
    }
    Ok(upper)
}

pub fn is_proper_coloring(g: &Graph, colors: &[usize]) -> bool {
    colors.len() == g.n() && g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
}

fn greedy_colors(g: &Graph) -> usize {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut color = vec![usize::MAX; g.n()];
    let mut used = 0;
    for &v in &order {
        let taken: Vec<usize> = g.neighbors(v).iter().map(|&u| color[u]).collect();
        let c = (0..).find(|c| !taken.contains(c)).unwrap();
        color[v] = c;
        used = used.max(c + 1);
    }
    used
}

fn greedy_clique(g: &Graph) -> usize {
    let mut best = 0;
    for start in 0..g.n() {
        let mut clique = vec![start];
        let mut cands: Vec<usize> = g.neighbors(start).to_vec();
        cands.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        for v in cands {
            if clique.iter().all(|&c| g.has_edge(c, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// DSATUR-ordered backtracking with symmetry breaking on fresh colours.
fn colorable(g: &Graph, k: usize) -> bool {
    let mut color = vec![usize::MAX; g.n()];
    dsatur(g, k, &mut color, 0, 0)
}

fn dsatur(g: &Graph, k: usize, color: &mut [usize], colored: usize, used: usize) -> bool {
    if colored == g.n() {
        return true;
    }
    // most saturated uncoloured vertex, ties by degree
    let mut pick = usize::MAX;
    let mut pick_key = (0, 0);
    for v in 0..g.n() {
        if color[v] != usize::MAX {
            continue;
        }
        let mut seen = vec![false; k];
        for &u in g.neighbors(v) {
            if color[u] != usize::MAX {
                seen[color[u]] = true;
            }
        }
        let key = (seen.iter().filter(|&&b| b).count(), g.degree(v));
        if pick == usize::MAX || key > pick_key {
            pick = v;
            pick_key = key;
        }
    }
    let v = pick;
    for c in 0..k.min(used + 1) {
        if g.neighbors(v).iter().any(|&u| color[u] == c) {
            continue;
        }
        color[v] = c;
        if dsatur(g, k, color, colored + 1, used.max(c + 1)) {
            return true;
        }
        color[v] = usize::MAX;
    }
    false
}
