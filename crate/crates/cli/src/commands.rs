use std::fs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use forge_core::bookpile::{bookpile_with, Bookpile, DEFAULT_VERTEX_CAP};
use forge_core::coords::LabeledVertex;
use forge_core::graph::{
    chromatic_number_with_limit, generators, girth, vertex_connectivity, vertex_connectivity_par, Graph,
};
use forge_core::graphon::{commonality_deficit_par, density_gradient, hom_density, jensen_check, StepGraphon};
use forge_core::hypergraph::{build_hqr, connect, lift_paths, threshold_q, validate_disjoint, validate_graph_paths};
use forge_core::search::{search_min_deficit, SearchConfig};
use forge_core::selftest::{run_selftest, SelftestConfig};
use forge_core::{Error, Result, VertexSet};

use crate::{Cli, Command, Format};

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity(_) => 3,
        Error::Contradiction(_) => 1,
        _ => 2,
    }
}

struct Output {
    json: Value,
    text: String,
    dot: Option<String>,
    ok: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output { json, text, dot: None, ok: true }
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    let mut out = dispatch(cli)?;
    let config = serde_json::to_value(cli)?;
    let body = match cli.global.format {
        Format::Json => {
            if let Value::Object(map) = &mut out.json {
                map.insert("config".into(), config);
            }
            serde_json::to_string_pretty(&out.json)? + "\n"
        }
        Format::Text => format!("config: {config}\n{}\n", out.text.trim_end()),
        Format::Dot => match out.dot {
            Some(d) => d,
            None => return Err(Error::Input("--format dot is only available for graph outputs".into())),
        },
    };
    match &cli.global.out {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(if out.ok { 0 } else { 1 })
}

fn load_graph(spec: &str) -> Result<Graph> {
    if spec.starts_with("gen:") {
        generators::from_name(spec)
    } else {
        Graph::from_json(&fs::read_to_string(spec)?)
    }
}

fn load_graphon(spec: &str) -> Result<StepGraphon> {
    let bad = || Error::Input(format!("bad graphon spec '{spec}'"));
    if let Some(rest) = spec.strip_prefix("const:") {
        let (m, p) = rest.split_once(':').ok_or_else(bad)?;
        let m = m.parse().map_err(|_| bad())?;
        return StepGraphon::constant(m, p.parse().map_err(|_| bad())?);
    }
    if let Some(m) = spec.strip_prefix("identity:") {
        return Ok(StepGraphon::block_identity(m.parse().map_err(|_| bad())?));
    }
    StepGraphon::from_json(&fs::read_to_string(spec)?)
}

fn graph_value(g: &Graph) -> Result<Value> {
    Ok(serde_json::from_str(&g.to_json())?)
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let seed = cli.global.seed;
    match &cli.command {
        Command::Bookpile { input, q, order } => {
            let h = load_graph(input)?;
            let order = order.clone().unwrap_or_else(|| (0..h.n()).collect());
            let b = bookpile_with(&h, *q, &order, DEFAULT_VERTEX_CAP)?;
            let mut json = graph_value(&b.graph)?;
            json["standard_copies"] = serde_json::to_value(&b.copies)?;
            let text = format!(
                "H(q) with q = {q}: {} vertices, {} edges, {} standard copies",
                b.graph.n(),
                b.graph.edge_count(),
                b.copies.len()
            );
            Ok(Output { dot: Some(b.graph.to_dot()), ..Output::new(json, text) })
        }
        Command::Hqr { q, r } => {
            let hg = build_hqr(*q, *r)?;
            let edges: Vec<Vec<String>> =
                (0..hg.edge_count()).map(|i| hg.edge(i).vertices().map(|v| v.to_string()).collect()).collect();
            let json = json!({
                "q": q, "r": r,
                "vertex_count": hg.vertex_count(),
                "edge_count": hg.edge_count(),
                "edges": edges,
            });
            let text = format!("H_{q}^{r}: {} vertices, {} edges", hg.vertex_count(), hg.edge_count());
            Ok(Output::new(json, text))
        }
        Command::Connect { q, r, k, u, v, lift } => {
            let hg = build_hqr(*q, *r)?;
            let (u, v): (LabeledVertex, LabeledVertex) = (u.parse()?, v.parse()?);
            let paths = connect(&hg, &u, &v, *k)?;
            let valid = validate_disjoint(&paths, &u, &v, hg.q(), *r)?;
            let shown: Vec<Value> = paths
                .iter()
                .map(|p| {
                    json!({
                        "vertices": p.vertices.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "edges": p.edges.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut json = json!({ "u": u.to_string(), "v": v.to_string(), "k": k, "paths": shown, "valid": valid });
            let mut ok = valid;
            if let Some(spec) = lift {
                let h = load_graph(spec)?;
                if h.n() != *r {
                    return Err(Error::Input(format!("--lift graph has {} vertices, expected r = {r}", h.n())));
                }
                let b = forge_core::bookpile::bookpile(&h, *q)?;
                let lifted = lift_paths(&h, &b.graph, &b.labels, &b.copies, &paths)?;
                let lifted_ok = validate_graph_paths(&b.graph, &lifted, u.index(b.q), v.index(b.q));
                ok &= lifted_ok;
                json["lifted"] = json!({ "paths": lifted, "valid": lifted_ok });
            }
            let text = format!("{} disjoint paths from {u} to {v}; valid = {ok}", paths.len());
            Ok(Output { ok, ..Output::new(json, text) })
        }
        Command::VerifyConnectivity { input, k, q, pairs } => {
            let h = load_graph(input)?;
            verify_connectivity(&h, *k, *q, *pairs, seed)
        }
        Command::Chi { input, limit } => {
            let g = load_graph(input)?;
            let chi = chromatic_number_with_limit(&g, *limit)?;
            Ok(Output::new(json!({ "n": g.n(), "chi": chi }), format!("chi = {chi}")))
        }
        Command::Girth { input } => {
            let g = load_graph(input)?;
            let girth = girth(&g);
            let text = girth.map_or("girth = infinity (acyclic)".to_string(), |x| format!("girth = {x}"));
            Ok(Output::new(json!({ "n": g.n(), "girth": girth }), text))
        }
        Command::Deficit { graph, graphon } => {
            let (h, w) = (load_graph(graph)?, load_graphon(graphon)?);
            let r = commonality_deficit_par(&h, &w)?;
            let text = format!("t(H,W) = {}, t(H,1-W) = {}, deficit = {}", r.t_w, r.t_comp, r.deficit);
            Ok(Output::new(serde_json::to_value(&r)?, text))
        }
        Command::Jensen { graph, iset, q, graphon } => {
            let (h, w) = (load_graph(graph)?, load_graphon(graphon)?);
            let r = jensen_check(&h, &VertexSet::new(iset.iter().copied()), *q, &w)?;
            let text = format!("lhs = {}, rhs = {}, ok = {}", r.lhs, r.rhs, r.ok);
            Ok(Output { ok: r.ok, ..Output::new(serde_json::to_value(&r)?, text) })
        }
        Command::GradientCheck { graph, graphon, step, tolerance } => {
            let (h, w) = (load_graph(graph)?, load_graphon(graphon)?);
            gradient_check(&h, &w, *step, *tolerance)
        }
        Command::Search { graph, m, starts, iters, step, shrink, tolerance } => {
            let h = load_graph(graph)?;
            let cfg = SearchConfig {
                m: *m,
                starts: *starts,
                max_iters: *iters,
                initial_step: *step,
                shrink: *shrink,
                tolerance: *tolerance,
                seed,
                parallel: cli.global.threads > 1,
            };
            let r = search_min_deficit(&h, &cfg)?;
            let text = format!("best deficit {} from start {} ({:?})", r.best_deficit, r.best_start, r.verdict);
            let mut json = serde_json::to_value(&r)?;
            json["search_config"] = json.as_object_mut().and_then(|o| o.remove("config")).unwrap_or(Value::Null);
            Ok(Output::new(json, text))
        }
        Command::Selftest => {
            let report = run_selftest(SelftestConfig { seed, threads: cli.global.threads });
            let text = report
                .checks
                .iter()
                .map(|c| format!("[{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.name))
                .collect::<Vec<_>>()
                .join("\n");
            let ok = report.passed;
            let mut json = serde_json::to_value(&report)?;
            json["selftest_config"] = json.as_object_mut().and_then(|o| o.remove("config")).unwrap_or(Value::Null);
            Ok(Output { ok, ..Output::new(json, text) })
        }
    }
}

fn verify_connectivity(h: &Graph, k: usize, q: Option<usize>, pairs: Option<usize>, seed: u64) -> Result<Output> {
    let Some(q) = q else {
        let kappa = vertex_connectivity(h)?;
        let ok = kappa >= k;
        return Ok(Output { ok, ..Output::new(json!({ "kappa": kappa, "k": k }), format!("kappa = {kappa}")) });
    };
    let r = h.n();
    let b = forge_core::bookpile::bookpile(h, q)?;
    let kappa = vertex_connectivity_par(&b.graph)?;
    let mut json = json!({ "q": q, "r": r, "k": k, "n": b.graph.n(), "kappa": kappa, "flow_ok": kappa >= k });
    let mut ok = kappa >= k;
    if r >= 2 && h.is_connected() && q >= threshold_q(k, r) {
        let (checked, failures) = constructive(h, &b, k, pairs, seed)?;
        ok &= failures.is_empty();
        json["constructive"] = json!({ "pairs": checked, "failures": failures });
    } else {
        json["constructive"] = Value::Null;
    }
    let text = format!("kappa(H(q)) = {kappa}, required {k}; verified = {ok}");
    Ok(Output { ok, ..Output::new(json, text) })
}

fn constructive(
    h: &Graph,
    b: &Bookpile,
    k: usize,
    pairs: Option<usize>,
    seed: u64,
) -> Result<(usize, Vec<(usize, usize)>)> {
    let hg = build_hqr(b.q as usize, b.r)?;
    let n = b.graph.n();
    let list: Vec<(usize, usize)> = match pairs {
        None => (0..n).flat_map(|a| (a + 1..n).map(move |c| (a, c))).collect(),
        Some(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let a = rng.gen_range(0..n);
                    (a, (a + rng.gen_range(1..n)) % n)
                })
                .collect()
        }
    };
    let check = |&(a, c): &(usize, usize)| -> Result<Option<(usize, usize)>> {
        let (u, v) = (&b.labels[a], &b.labels[c]);
        let paths = connect(&hg, u, v, k)?;
        let lifted = lift_paths(h, &b.graph, &b.labels, &b.copies, &paths)?;
        let good = validate_disjoint(&paths, u, v, b.q, b.r)? && validate_graph_paths(&b.graph, &lifted, a, c);
        Ok((!good).then_some((a, c)))
    };
    let results: Vec<Option<(usize, usize)>> = list.par_iter().map(check).collect::<Result<_>>()?;
    Ok((list.len(), results.into_iter().flatten().collect()))
}

fn gradient_check(h: &Graph, w: &StepGraphon, step: f64, tolerance: f64) -> Result<Output> {
    let m = w.m();
    let g = density_gradient(h, w)?;
    let params = w.upper();
    let f = |p: &[f64]| hom_density(h, &StepGraphon::from_upper(m, p)?);
    let at = |k: usize, d: f64| -> Result<f64> {
        let mut p = params.clone();
        p[k] += d;
        f(&p)
    };
    let mut analytic = Vec::new();
    let mut numeric = Vec::new();
    let mut k = 0;
    for a in 0..m {
        for c in a..m {
            let x = params[k];
            let fd = if x - step >= 0.0 && x + step <= 1.0 {
                (at(k, step)? - at(k, -step)?) / (2.0 * step)
            } else {
                let s = if x + 2.0 * step <= 1.0 { step } else { -step };
                (-3.0 * f(&params)? + 4.0 * at(k, s)? - at(k, 2.0 * s)?) / (2.0 * s)
            };
            analytic.push(g[a][c]);
            numeric.push(fd);
            k += 1;
        }
    }
    let scale = analytic.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    let err = analytic.iter().zip(&numeric).fold(0.0f64, |s, (x, y)| s.max((x - y).abs()));
    let rel = if scale == 0.0 { err } else { err / scale };
    let ok = rel <= tolerance;
    let json = json!({ "analytic": g, "finite_difference": numeric, "relative_error": rel, "ok": ok });
    Ok(Output { ok, ..Output::new(json, format!("relative error {rel:e}; ok = {ok}")) })
}
