//! A fixed, seeded battery of invariant checks across the crate, producing
//! a report that depends only on the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bookpile::{bookpile, check_standard_copies, verify_clone_coloring};
use crate::error::Result;
use crate::graph::generators::*;
use crate::graph::{
    are_isomorphic, chromatic_number, chromatic_number_with_limit, girth, vertex_connectivity, Graph, VertexSet,
};
use crate::graphon::{commonality_deficit, density_gradient, hom_density, jensen_check, StepGraphon};
use crate::hypergraph::{
    aux_hypergraph_of_copies, aux_product_graph, build_hqr, connect, lift_paths, threshold_q, validate_disjoint,
    validate_graph_paths,
};
use crate::search::{certify_witness, search_min_deficit, SearchConfig, WITNESS_THRESHOLD};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestConfig {
    pub seed: u64,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub config: SelftestConfig,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn check(name: &str, f: impl FnOnce() -> Result<(bool, Value)>) -> Check {
    let (passed, detail) = f().unwrap_or_else(|e| (false, json!({ "error": e.to_string() })));
    Check { name: name.to_string(), passed, detail }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs every check; each check draws from its own ChaCha8 stream of `seed`.
pub fn run_selftest(config: SelftestConfig) -> SelftestReport {
    let seed = config.seed;
    let checks = vec![
        check("graph-invariants", || {
            let p = petersen();
            let got = json!({
                "petersen_kappa": vertex_connectivity(&p)?,
                "petersen_chi": chromatic_number(&p)?,
                "petersen_girth": girth(&p),
                "c5_chi": chromatic_number(&cycle(5))?,
                "q3_kappa": vertex_connectivity(&hypercube(3))?,
            });
            let want = json!({"petersen_kappa": 3, "petersen_chi": 3, "petersen_girth": 5, "c5_chi": 3, "q3_kappa": 3});
            Ok((got == want, got))
        }),
        check("bookpile-counts", || {
            let mut ok = true;
            let mut rows = Vec::new();
            for (name, h) in [("k2", complete(2)), ("k3", complete(3)), ("c5", cycle(5)), ("k4", complete(4))] {
                for q in 1..=3usize {
                    let b = bookpile(&h, q)?;
                    let r = h.n();
                    let good = b.graph.n() == r * q.pow(r as u32 - 1)
                        && b.graph.edge_count() == q.pow(r as u32) * h.edge_count()
                        && check_standard_copies(&h, &b.graph, &b.copies).is_ok();
                    ok &= good;
                    rows.push(json!([name, q, b.graph.n(), b.graph.edge_count(), good]));
                }
            }
            Ok((ok, Value::Array(rows)))
        }),
        check("line-graph-of-cube", || {
            let iso = are_isomorphic(&bookpile(&complete(3), 2)?.graph, &line_graph(&hypercube(3)))?;
            Ok((iso, json!({ "isomorphic": iso })))
        }),
        check("aux-hypergraph", || {
            let mut ok = true;
            for (h, q) in [(complete(3), 2), (complete(3), 3), (complete(2), 3), (complete(4), 2)] {
                let b = bookpile(&h, q)?;
                ok &= aux_hypergraph_of_copies(&b.labels, &b.copies, q, h.n())?.isomorphic;
            }
            Ok((ok, json!({ "all_isomorphic": ok })))
        }),
        check("chromatic-preservation", || {
            let mut rows = Vec::new();
            let mut ok = true;
            for (name, h) in [("k3", complete(3)), ("c5", cycle(5)), ("k4", complete(4))] {
                let b = bookpile(&h, 2)?;
                let (chi_h, chi_b) = (chromatic_number(&h)?, chromatic_number_with_limit(&b.graph, b.graph.n())?);
                let clone = verify_clone_coloring(&h, &b.graph)?;
                ok &= chi_h == chi_b && clone;
                rows.push(json!([name, chi_h, chi_b, clone]));
            }
            Ok((ok, Value::Array(rows)))
        }),
        check("bookpile-girth", || {
            let mut rows = Vec::new();
            let mut ok = true;
            for (name, h) in [("k2", complete(2)), ("k3", complete(3)), ("c5", cycle(5)), ("p3", path(3))] {
                let g = girth(&bookpile(&h, 2)?.graph);
                ok &= g.is_some_and(|g| g <= 4);
                rows.push(json!([name, g]));
            }
            Ok((ok, Value::Array(rows)))
        }),
        check("product-connectivity", || {
            let mut rows = Vec::new();
            let mut ok = true;
            for (q, r) in [(3, 3), (4, 3), (3, 4)] {
                let kappa = vertex_connectivity(&aux_product_graph(q, r)?)?;
                ok &= kappa == (r - 1) * (q - 1);
                rows.push(json!([q, r, kappa]));
            }
            Ok((ok, Value::Array(rows)))
        }),
        check("hypergraph-paths", || {
            let (k, r) = (2, 3);
            let q = threshold_q(k, r);
            let hg = build_hqr(q, r)?;
            let mut rng = rng_for(seed, 1);
            let n = hg.vertex_count();
            let mut ok = true;
            for _ in 0..60 {
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                let (u, v) = (hg.vertex(a), hg.vertex(b));
                let paths = connect(&hg, &u, &v, k)?;
                ok &= paths.len() == k && validate_disjoint(&paths, &u, &v, hg.q(), r)?;
            }
            Ok((ok, json!({ "q": q, "r": r, "k": k, "pairs": 60 })))
        }),
        check("lifted-paths", || {
            let h = complete(3);
            let q = threshold_q(2, 3);
            let b = bookpile(&h, q)?;
            let hg = build_hqr(q, 3)?;
            let mut rng = rng_for(seed, 2);
            let n = hg.vertex_count();
            let mut ok = true;
            for _ in 0..20 {
                let a = rng.gen_range(0..n);
                let c = (a + rng.gen_range(1..n)) % n;
                let (u, v) = (hg.vertex(a), hg.vertex(c));
                let lifted = lift_paths(&h, &b.graph, &b.labels, &b.copies, &connect(&hg, &u, &v, 2)?)?;
                ok &= validate_graph_paths(&b.graph, &lifted, u.index(b.q), v.index(b.q));
            }
            Ok((ok, json!({ "pairs": 20 })))
        }),
        check("triangle-deficit", || {
            let mut rng = rng_for(seed, 3);
            let mut worst = f64::INFINITY;
            for _ in 0..200 {
                let m = rng.gen_range(1..=8);
                let w = StepGraphon::random(m, &mut rng);
                worst = worst.min(commonality_deficit(&complete(3), &w)?.deficit);
            }
            Ok((worst >= WITNESS_THRESHOLD, json!({ "trials": 200, "min_deficit": worst })))
        }),
        check("jensen", || {
            let mut rng = rng_for(seed, 4);
            let hs = [complete(2), complete(3), cycle(4), cycle(5)];
            let mut ok = true;
            for _ in 0..50 {
                let h = &hs[rng.gen_range(0..hs.len())];
                let q = rng.gen_range(2..=3);
                let m = rng.gen_range(1..=3);
                let i = VertexSet::new([rng.gen_range(0..h.n())]);
                ok &= jensen_check(h, &i, q, &StepGraphon::random(m, &mut rng))?.ok;
            }
            Ok((ok, json!({ "trials": 50 })))
        }),
        check("gradient", || {
            let mut rng = rng_for(seed, 5);
            let mut worst: f64 = 0.0;
            for _ in 0..20 {
                let h = random_graph(&mut rng, 5);
                let m = rng.gen_range(1..=4);
                let params: Vec<f64> = (0..m * (m + 1) / 2).map(|_| rng.gen_range(0.01..0.99)).collect();
                worst = worst.max(gradient_error(&h, m, &params)?);
            }
            Ok((worst <= 1e-6, json!({ "trials": 20, "max_relative_error": worst })))
        }),
        check("search", || {
            let cfg = SearchConfig { m: 3, starts: 4, max_iters: 100, seed, ..SearchConfig::default() };
            let r = search_min_deficit(&complete(3), &cfg)?;
            let ok = (WITNESS_THRESHOLD..=1e-6).contains(&r.best_deficit);
            Ok((ok, json!({ "best_deficit": r.best_deficit, "best_start": r.best_start, "verdict": r.verdict })))
        }),
        check("witness", || {
            let v = certify_witness(&complete(3), &StepGraphon::constant(4, 0.5)?)?;
            Ok((!v.witness, json!(v)))
        }),
    ];
    let passed = checks.iter().all(|c| c.passed);
    SelftestReport { config, checks, passed }
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>();
    Graph::new(n, edges).expect("simple edge list")
}

/// Sup-norm relative error between the analytic gradient and central
/// differences with step `1e-6`.
fn gradient_error(h: &Graph, m: usize, params: &[f64]) -> Result<f64> {
    let w = StepGraphon::from_upper(m, params)?;
    let g = density_gradient(h, &w)?;
    let analytic: Vec<f64> = (0..m).flat_map(|a| (a..m).map(move |b| (a, b))).map(|(a, b)| g[a][b]).collect();
    let step = 1e-6;
    let mut numeric = Vec::with_capacity(params.len());
    for k in 0..params.len() {
        let mut hi = params.to_vec();
        let mut lo = params.to_vec();
        hi[k] += step;
        lo[k] -= step;
        let f = |p: &[f64]| hom_density(h, &StepGraphon::from_upper(m, p)?);
        numeric.push((f(&hi)? - f(&lo)?) / (2.0 * step));
    }
    let scale = analytic.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    let err = analytic.iter().zip(&numeric).fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
    Ok(if scale == 0.0 { err } else { err / scale })
}
