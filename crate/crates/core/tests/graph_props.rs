use proptest::prelude::*;

use forge_core::graph::generators::*;
use forge_core::graph::{
    are_isomorphic, chromatic_number, find_isomorphism, girth, is_proper_coloring, vertex_connectivity,
    vertex_connectivity_par,
};
use forge_core::Graph;

fn random_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1usize..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            Graph::new(n, pairs.zip(bits).filter(|(_, keep)| *keep).map(|(e, _)| e)).unwrap()
        })
    })
}

/// Smallest vertex set whose removal disconnects the graph (n - 1 for complete graphs).
fn brute_connectivity(g: &Graph) -> usize {
    let n = g.n();
    let mut best = n.saturating_sub(1);
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size >= best || n - size < 2 {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|&x| mask & (1 << x) == 0).collect();
        if !g.induced(&keep).is_connected() {
            best = size;
        }
    }
    best
}

fn brute_chromatic(g: &Graph) -> usize {
    let n = g.n();
    (1..=n.max(1))
        .find(|&k| {
            let mut colors = vec![0usize; n];
            loop {
                if is_proper_coloring(g, &colors) {
                    return true;
                }
                let mut i = 0;
                while i < n {
                    colors[i] += 1;
                    if colors[i] < k {
                        break;
                    }
                    colors[i] = 0;
                    i += 1;
                }
                if i == n {
                    return false;
                }
            }
        })
        .unwrap_or(0)
}

/// Shortest cycle through each edge is 1 + the distance between its ends without it.
fn brute_girth(g: &Graph) -> Option<usize> {
    g.edges()
        .iter()
        .filter_map(|&(u, v)| {
            let rest = Graph::new(g.n(), g.edges().iter().copied().filter(|&e| e != (u, v))).unwrap();
            rest.bfs_distances(u)[v].map(|d| d + 1)
        })
        .min()
}

proptest! {
    #[test]
    fn connectivity_matches_brute_force(g in random_graph(7).prop_filter("n >= 2", |g| g.n() >= 2)) {
        let k = vertex_connectivity(&g).unwrap();
        prop_assert_eq!(k, brute_connectivity(&g));
        prop_assert_eq!(k, vertex_connectivity_par(&g).unwrap());
    }

    #[test]
    fn chromatic_matches_brute_force(g in random_graph(7)) {
        prop_assert_eq!(chromatic_number(&g).unwrap(), brute_chromatic(&g));
    }

    #[test]
    fn girth_matches_brute_force(g in random_graph(8)) {
        prop_assert_eq!(girth(&g), brute_girth(&g));
    }

    #[test]
    fn permuted_graphs_are_isomorphic(g in random_graph(8), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = g.permuted(&perm);
        let map = find_isomorphism(&g, &h).unwrap().expect("isomorphic by construction");
        prop_assert!(g.edges().iter().all(|&(a, b)| h.has_edge(map[a], map[b])));
    }

    #[test]
    fn json_round_trip(g in random_graph(8)) {
        prop_assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }
}

#[test]
fn named_families() {
    assert_eq!(vertex_connectivity(&complete(6)).unwrap(), 5);
    assert_eq!(vertex_connectivity(&petersen()).unwrap(), 3);
    assert_eq!(vertex_connectivity(&hypercube(4)).unwrap(), 4);
    assert_eq!(vertex_connectivity(&hamming(3, 3)).unwrap(), 6);
    assert_eq!(chromatic_number(&petersen()).unwrap(), 3);
    assert_eq!(girth(&petersen()), Some(5));
    assert_eq!(girth(&path(5)), None);
    assert!(!are_isomorphic(&cycle(6), &complete_bipartite(3, 3)).unwrap());
    assert!(are_isomorphic(&hamming(2, 3), &hypercube(3)).unwrap());
}
