//! Projected gradient descent on `t(H,W) + t(H,1-W)` over step graphons,
//! looking for graphons with negative commonality deficit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::graph::Graph;
use crate::graphon::{commonality_deficit, objective_gradient, random_coloring_density, DensityReport, StepGraphon};

/// Deficits below this are reported as uncommonness witnesses.
pub const WITNESS_THRESHOLD: f64 = -1e-9;

/// Line search gives up once the step falls below this.
pub const MIN_STEP: f64 = 1e-12;

const ARMIJO: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Number of blocks.
    pub m: usize,
    /// Random restarts, in addition to the constant-1/2 and block-identity starts.
    pub starts: usize,
    pub max_iters: usize,
    pub initial_step: f64,
    /// Backtracking factor, strictly between 0 and 1.
    pub shrink: f64,
    /// Stop once the projected gradient has sup-norm below this.
    pub tolerance: f64,
    pub seed: u64,
    /// Run restarts on the rayon pool.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            m: 4,
            starts: 20,
            max_iters: 500,
            initial_step: 1.0,
            shrink: 0.5,
            tolerance: 1e-10,
            seed: 0,
            parallel: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.max_iters == 0 {
            return input("m and max_iters must be positive");
        }
        if !(self.initial_step > 0.0 && self.tolerance > 0.0) {
            return input("initial step and tolerance must be positive");
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return input(format!("shrink factor {} is not in (0,1)", self.shrink));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NegativeDeficitFound,
    /// No negative deficit was found and the best run converged. This is not
    /// a proof that `H` is common.
    NonnegativeMinimum,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartTrace {
    pub start: usize,
    pub kind: String,
    pub converged: bool,
    /// `(iteration, deficit)` after every accepted step, starting at iteration 0.
    pub trajectory: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    /// Block count of the best graphon, so the result parses as a graphon file.
    pub m: usize,
    pub values: Vec<Vec<f64>>,
    pub best_deficit: f64,
    pub best_start: usize,
    pub report: DensityReport,
    pub verdict: Verdict,
    pub traces: Vec<StartTrace>,
}

impl SearchResult {
    pub fn best_graphon(&self) -> StepGraphon {
        StepGraphon::new(self.values.clone()).expect("search iterates stay valid")
    }
}

fn starting_points(cfg: &SearchConfig) -> Vec<(String, StepGraphon)> {
    let mut out = vec![
        ("constant-half".to_string(), StepGraphon::constant(cfg.m, 0.5).expect("1/2 is in range")),
        ("block-identity".to_string(), StepGraphon::block_identity(cfg.m)),
    ];
    for s in 0..cfg.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(s as u64);
        out.push((format!("random-{s}"), StepGraphon::random(cfg.m, &mut rng)));
    }
    out
}

struct Descent {
    best: StepGraphon,
    deficit: f64,
    converged: bool,
    trajectory: Vec<(usize, f64)>,
}

fn descend(h: &Graph, start: StepGraphon, cfg: &SearchConfig) -> Result<Descent> {
    let base: f64 = random_coloring_density(h.edge_count())?;
    let objective = |w: &StepGraphon| -> Result<f64> {
        let r = commonality_deficit(h, w)?;
        Ok(r.t_w + r.t_comp)
    };
    let project = |x: f64| x.clamp(0.0, 1.0);
    let mut x = start.upper();
    let mut w = start;
    let mut f = objective(&w)?;
    let mut trajectory = vec![(0, f - base)];
    let mut converged = false;
    for iter in 1..=cfg.max_iters {
        let g = objective_gradient(h, &w)?;
        let pg = x.iter().zip(&g).map(|(xi, gi)| (project(xi - gi) - xi).abs()).fold(0.0, f64::max);
        if pg < cfg.tolerance {
            converged = true;
            break;
        }
        let mut step = cfg.initial_step;
        let accepted = loop {
            if step < MIN_STEP {
                break None;
            }
            let cand: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| project(xi - step * gi)).collect();
            let decrease: f64 = x.iter().zip(&cand).zip(&g).map(|((xi, ci), gi)| gi * (xi - ci)).sum();
            let cw = StepGraphon::from_upper(cfg.m, &cand)?;
            let fc = objective(&cw)?;
            if fc <= f - ARMIJO * decrease {
                break Some((cand, cw, fc));
            }
            step *= cfg.shrink;
        };
        let Some((cand, cw, fc)) = accepted else {
            converged = true;
            break;
        };
        assert!(fc <= f, "accepted step increased the objective");
        assert!(cand.iter().all(|c| (0.0..=1.0).contains(c)), "iterate left the box");
        assert!((0..cfg.m).all(|a| (0..cfg.m).all(|b| cw.get(a, b) == cw.get(b, a))), "iterate is not symmetric");
        x = cand;
        w = cw;
        f = fc;
        trajectory.push((iter, f - base));
    }
    Ok(Descent { deficit: f - base, best: w, converged, trajectory })
}

/// Multi-start projected gradient descent with Armijo backtracking. Starts
/// are the constant 1/2 graphon, the block identity, then `cfg.starts`
/// seeded random graphons; start `s` uses ChaCha8 stream `s` of `cfg.seed`,
/// so results do not depend on the thread count.
pub fn search_min_deficit(h: &Graph, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let starts = starting_points(cfg);
    commonality_deficit(h, &starts[0].1)?;
    let run = |(k, w): (String, StepGraphon)| descend(h, w, cfg).map(|d| (k, d));
    let runs: Vec<(String, Descent)> = if cfg.parallel {
        starts.into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        starts.into_iter().map(run).collect::<Result<_>>()?
    };
    let best_start = (0..runs.len())
        .min_by(|&a, &b| runs[a].1.deficit.total_cmp(&runs[b].1.deficit).then(a.cmp(&b)))
        .expect("at least the two canonical starts");
    let best = runs[best_start].1.best.clone();
    let report = commonality_deficit(h, &best)?;
    let verdict = if report.deficit < WITNESS_THRESHOLD {
        Verdict::NegativeDeficitFound
    } else if runs[best_start].1.converged {
        Verdict::NonnegativeMinimum
    } else {
        Verdict::IterationLimit
    };
    let traces = runs
        .into_iter()
        .enumerate()
        .map(|(start, (kind, d))| StartTrace { start, kind, converged: d.converged, trajectory: d.trajectory })
        .collect();
    Ok(SearchResult {
        config: cfg.clone(),
        m: best.m(),
        values: best.rows(),
        best_deficit: report.deficit,
        best_start,
        report,
        verdict,
        traces,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessVerdict {
    pub deficit: f64,
    pub witness: bool,
}

/// Sequential re-evaluation of the deficit; `witness` iff it is below
/// [`WITNESS_THRESHOLD`].
pub fn certify_witness(h: &Graph, w: &StepGraphon) -> Result<WitnessVerdict> {
    let deficit = commonality_deficit(h, w)?.deficit;
    if deficit.is_nan() {
        return Err(Error::Contradiction("deficit evaluated to NaN".into()));
    }
    Ok(WitnessVerdict { deficit, witness: deficit < WITNESS_THRESHOLD })
}
