//! End-to-end acceptance checks. Each criterion prints one `[PASS]`/`[FAIL]`
//! line; the run fails if any check or time budget is missed.

use std::collections::BTreeSet;
use std::panic;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use forge_core::bookpile::{bookpile, check_standard_copies, verify_clone_coloring};
use forge_core::graph::generators::*;
use forge_core::graph::{
    are_isomorphic, chromatic_number, chromatic_number_with_limit, girth, is_independent, vertex_connectivity, Graph,
};
use forge_core::graphon::{commonality_deficit, density_gradient, jensen_check, StepGraphon};
use forge_core::hypergraph::{
    aux_hypergraph_of_copies, aux_product_graph, build_hqr, connect, lift_paths, threshold_q, validate_disjoint,
    validate_graph_paths,
};
use forge_core::search::{search_min_deficit, SearchConfig};
use forge_core::VertexSet;

fn verdict(id: u32, what: &str, limit: Duration, check: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let outcome = match outcome {
        Ok(_) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
        other => other,
    };
    match &outcome {
        Ok(detail) => println!("[PASS] AC-{id} {what}: {detail} ({elapsed:.2?})"),
        Err(why) => println!("[FAIL] AC-{id} {what}: {why} ({elapsed:.2?})"),
    }
    if let Err(why) = outcome {
        panic!("AC-{id} failed: {why}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn named() -> Vec<(&'static str, Graph)> {
    vec![("K2", complete(2)), ("K3", complete(3)), ("C5", cycle(5)), ("K4", complete(4))]
}

fn ac01_structural_counts() {
    verdict(1, "structural counts", Duration::from_secs(5), || {
        for (name, h) in named() {
            for q in 1..=3usize {
                let b = bookpile(&h, q).map_err(|e| e.to_string())?;
                let r = h.n() as u32;
                ensure(b.graph.n() == h.n() * q.pow(r - 1), || format!("{name}, q={q}: |V| = {}", b.graph.n()))?;
                ensure(b.graph.edge_count() == q.pow(r) * h.edge_count(), || {
                    format!("{name}, q={q}: |E| = {}", b.graph.edge_count())
                })?;
                let mut covered = BTreeSet::new();
                for c in &b.copies {
                    for &(x, y) in h.edges() {
                        let (a, z) = (c.vertex_map[x], c.vertex_map[y]);
                        ensure(covered.insert((a.min(z), a.max(z))), || format!("{name}, q={q}: edge reused"))?;
                    }
                }
                let all: BTreeSet<_> = b.graph.edges().iter().copied().collect();
                ensure(covered == all, || format!("{name}, q={q}: copies do not cover E"))?;
                check_standard_copies(&h, &b.graph, &b.copies).map_err(|e| format!("{name}, q={q}: {e}"))?;
            }
        }
        Ok("12 instances".into())
    });
}

fn ac02_line_graph_identity() {
    verdict(2, "bookpile(K3,2) is L(Q3)", Duration::from_secs(1), || {
        let b = bookpile(&complete(3), 2).map_err(|e| e.to_string())?;
        let iso = are_isomorphic(&b.graph, &line_graph(&hypercube(3))).map_err(|e| e.to_string())?;
        ensure(iso, || "not isomorphic".into())?;
        Ok("isomorphic".into())
    });
}

fn ac03_aux_hypergraph() {
    verdict(3, "hypergraph of standard copies is H_q^r", Duration::from_secs(10), || {
        for (h, q) in [(complete(3), 2), (complete(3), 3), (complete(2), 3), (complete(4), 2)] {
            let b = bookpile(&h, q).map_err(|e| e.to_string())?;
            let c = aux_hypergraph_of_copies(&b.labels, &b.copies, q, h.n()).map_err(|e| e.to_string())?;
            ensure(c.isomorphic, || format!("r={}, q={q}: {:?}", h.n(), c.mismatch))?;
        }
        Ok("4 instances".into())
    });
}

fn ac04_chromatic_preservation() {
    verdict(4, "chi(bookpile(h,2)) = chi(h)", Duration::from_secs(60), || {
        let mut seen = Vec::new();
        for (name, h) in [("K3", complete(3)), ("C5", cycle(5)), ("K4", complete(4))] {
            let b = bookpile(&h, 2).map_err(|e| e.to_string())?;
            let chi_h = chromatic_number(&h).map_err(|e| e.to_string())?;
            let chi_b = chromatic_number_with_limit(&b.graph, b.graph.n()).map_err(|e| e.to_string())?;
            ensure(chi_h == chi_b, || format!("{name}: {chi_h} vs {chi_b}"))?;
            let clone = verify_clone_coloring(&h, &b.graph).map_err(|e| e.to_string())?;
            ensure(clone, || format!("{name}: clone colouring rejected"))?;
            seen.push(format!("{name}:{chi_b}"));
        }
        Ok(seen.join(" "))
    });
}

fn ac05_girth() {
    verdict(5, "girth(bookpile) <= 4", Duration::from_secs(5), || {
        let mut hs = named();
        hs.extend([("P3", path(3)), ("P4", path(4)), ("S3", star(3)), ("C4", cycle(4))]);
        for (name, h) in &hs {
            for q in 2..=3 {
                let g = girth(&bookpile(h, q).map_err(|e| e.to_string())?.graph);
                ensure(g.is_some_and(|g| g <= 4), || format!("{name}, q={q}: girth {g:?}"))?;
            }
        }
        Ok(format!("{} graphs, q in 2..=3", hs.len()))
    });
}

fn ac06_product_connectivity() {
    verdict(6, "kappa(K_q^(r-1)) = (r-1)(q-1)", Duration::from_secs(30), || {
        for (q, r) in [(3, 3), (4, 3), (3, 4)] {
            let g = aux_product_graph(q, r).map_err(|e| e.to_string())?;
            ensure(g == hamming(q, r - 1), || format!("q={q}, r={r}: not K_q^(r-1)"))?;
            let kappa = vertex_connectivity(&g).map_err(|e| e.to_string())?;
            ensure(kappa == (r - 1) * (q - 1), || format!("q={q}, r={r}: kappa {kappa}"))?;
        }
        Ok("3 instances".into())
    });
}

fn ac07_all_pairs_hyperpaths() {
    verdict(7, "2 disjoint hyperpaths for all pairs of H_9^3", Duration::from_secs(600), || {
        let (k, r) = (2, 3);
        let q = threshold_q(k, r);
        ensure(q == 9, || format!("threshold_q(2,3) = {q}"))?;
        let hg = build_hqr(q, r).map_err(|e| e.to_string())?;
        let n = hg.vertex_count();
        ensure(n == 243, || format!("{n} vertices"))?;
        let mut pairs = 0;
        for a in 0..n {
            let u = hg.vertex(a);
            for b in a + 1..n {
                let v = hg.vertex(b);
                let paths = connect(&hg, &u, &v, k).map_err(|e| format!("{u}-{v}: {e}"))?;
                let ok = paths.len() == k && validate_disjoint(&paths, &u, &v, hg.q(), r).map_err(|e| e.to_string())?;
                ensure(ok, || format!("{u}-{v}: rejected"))?;
                pairs += 1;
            }
        }
        ensure(pairs == 243 * 242 / 2, || format!("{pairs} pairs"))?;
        Ok(format!("{pairs} pairs validated"))
    });
}

fn ac08_end_to_end_lift() {
    verdict(8, "kappa(bookpile(K3,9)) >= 2 and lifted certificates", Duration::from_secs(600), || {
        let h = complete(3);
        let b = bookpile(&h, 9).map_err(|e| e.to_string())?;
        let kappa = vertex_connectivity(&b.graph).map_err(|e| e.to_string())?;
        ensure(kappa >= 2, || format!("kappa {kappa}"))?;
        let hg = build_hqr(9, 3).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = b.graph.n();
        for _ in 0..100 {
            let a = rng.gen_range(0..n);
            let c = (a + rng.gen_range(1..n)) % n;
            let (u, v) = (&b.labels[a], &b.labels[c]);
            let paths = connect(&hg, u, v, 2).map_err(|e| e.to_string())?;
            let lifted = lift_paths(&h, &b.graph, &b.labels, &b.copies, &paths).map_err(|e| e.to_string())?;
            ensure(validate_graph_paths(&b.graph, &lifted, a, c), || format!("{u}-{v}: lifted paths rejected"))?;
        }
        Ok(format!("kappa = {kappa}, 100 pairs lifted"))
    });
}

fn ac09_triangle_common() {
    verdict(9, "K3 deficit is nonnegative", Duration::from_secs(120), || {
        let k3 = complete(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut worst = f64::INFINITY;
        for _ in 0..1000 {
            let m = rng.gen_range(1..=8);
            let w = StepGraphon::random(m, &mut rng);
            worst = worst.min(commonality_deficit(&k3, &w).map_err(|e| e.to_string())?.deficit);
        }
        ensure(worst >= -1e-9, || format!("deficit {worst}"))?;
        let cfg = SearchConfig { m: 4, starts: 20, seed: 9, ..SearchConfig::default() };
        let r = search_min_deficit(&k3, &cfg).map_err(|e| e.to_string())?;
        ensure((-1e-9..=1e-6).contains(&r.best_deficit), || format!("search best {}", r.best_deficit))?;
        Ok(format!("min random deficit {worst:.3e}, search best {:.3e}", r.best_deficit))
    });
}

fn random_independent_set(h: &Graph, rng: &mut ChaCha8Rng) -> VertexSet {
    let mut set = vec![rng.gen_range(0..h.n())];
    for x in 0..h.n() {
        if !set.contains(&x) && set.iter().all(|&y| !h.has_edge(x, y)) && rng.gen_bool(0.5) {
            set.push(x);
        }
    }
    VertexSet::new(set)
}

fn ac10_jensen() {
    verdict(10, "t(q-book) >= t(h)^q", Duration::from_secs(120), || {
        let hs = [complete(2), complete(3), cycle(4), cycle(5)];
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for trial in 0..500 {
            let h = &hs[rng.gen_range(0..hs.len())];
            let q = rng.gen_range(2..=3);
            let i = random_independent_set(h, &mut rng);
            assert!(is_independent(h, &i).unwrap());
            let book_n = q * (h.n() - i.len()) + i.len();
            let max_m = (1..=4).rev().find(|&m: &usize| m.pow(book_n as u32) <= 2_000_000).unwrap();
            let w = StepGraphon::random(rng.gen_range(1..=max_m), &mut rng);
            let r = jensen_check(h, &i, q, &w).map_err(|e| e.to_string())?;
            ensure(r.ok, || format!("trial {trial}: lhs {} < rhs {}", r.lhs, r.rhs))?;
        }
        Ok("500 instances".into())
    });
}

/// Plain density over an arbitrary real matrix, used as the finite-difference oracle.
fn raw_density(h: &Graph, m: usize, w: &[f64]) -> f64 {
    let n = h.n();
    let mut map = vec![0usize; n];
    let mut sum = 0.0;
    for _ in 0..m.pow(n as u32) {
        sum += h.edges().iter().map(|&(x, y)| w[map[x] * m + map[y]]).product::<f64>();
        for d in map.iter_mut() {
            *d += 1;
            if *d < m {
                break;
            }
            *d = 0;
        }
    }
    sum / (m.pow(n as u32) as f64)
}

fn ac11_gradient() {
    verdict(11, "gradient matches central differences", Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let step = 1e-6;
        let mut worst: f64 = 0.0;
        for trial in 0..100 {
            let n = rng.gen_range(1..=5);
            let edges: Vec<_> =
                (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.5)).collect();
            let h = Graph::new(n, edges).unwrap();
            let m = rng.gen_range(1..=4);
            let w = StepGraphon::random(m, &mut rng);
            let g = density_gradient(&h, &w).map_err(|e| e.to_string())?;
            let base: Vec<f64> = (0..m * m).map(|i| *w.get(i / m, i % m)).collect();
            let mut err: f64 = 0.0;
            let mut scale: f64 = 0.0;
            for a in 0..m {
                for b in a..m {
                    let shifted = |d: f64| {
                        let mut x = base.clone();
                        x[a * m + b] += d;
                        if a != b {
                            x[b * m + a] += d;
                        }
                        raw_density(&h, m, &x)
                    };
                    let fd = (shifted(step) - shifted(-step)) / (2.0 * step);
                    err = err.max((g[a][b] - fd).abs());
                    scale = scale.max(g[a][b].abs());
                }
            }
            let rel = if scale == 0.0 { err } else { err / scale };
            ensure(rel <= 1e-6, || format!("trial {trial}: relative error {rel:e}"))?;
            worst = worst.max(rel);
        }
        Ok(format!("worst relative error {worst:.2e}"))
    });
}

fn ac12_selftest_deterministic() {
    verdict(12, "selftest output is byte-identical", Duration::from_secs(600), || {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_forge"))
                .args(["selftest", "--seed", "7", "--threads", "1"])
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        ensure(a.status.success(), || format!("exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr)))?;
        ensure(a.stdout == b.stdout, || "outputs differ".into())?;
        ensure(!a.stdout.is_empty(), || "empty output".into())?;
        Ok(format!("{} bytes twice", a.stdout.len()))
    });
}

fn main() {
    let criteria: [fn(); 12] = [
        ac01_structural_counts,
        ac02_line_graph_identity,
        ac03_aux_hypergraph,
        ac04_chromatic_preservation,
        ac05_girth,
        ac06_product_connectivity,
        ac07_all_pairs_hyperpaths,
        ac08_end_to_end_lift,
        ac09_triangle_common,
        ac10_jensen,
        ac11_gradient,
        ac12_selftest_deterministic,
    ];
    let failed = criteria.iter().filter(|c| panic::catch_unwind(**c).is_err()).count();
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
