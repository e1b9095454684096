#![allow(clippy::needless_range_loop)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;

/// Bookpile graphs, hypergraph path systems and graphon commonality.
#[derive(Parser, Debug, Serialize)]
#[command(name = "forge", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for all-pairs verification, density sums and search restarts.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build the q-bookpile H(q) of a graph.
    Bookpile {
        /// Graph JSON file or a generator such as gen:k3.
        #[arg(long, alias = "graph")]
        input: String,
        #[arg(long)]
        q: usize,
        /// Processing order of the vertices (comma separated).
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Describe the hypergraph H_q^r of standard copies.
    Hqr {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
    },
    /// Build k internally disjoint u-v hyperpaths in H_q^r.
    Connect {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        /// Vertex label such as "(1,2,a)".
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Also lift the paths into the bookpile of this graph (r vertices).
        #[arg(long)]
        lift: Option<String>,
    },
    /// Check k-connectivity by max-flow and, with --q, constructively.
    VerifyConnectivity {
        #[arg(long, alias = "graph")]
        input: String,
        #[arg(long)]
        k: usize,
        /// Verify the bookpile H(q) of the input instead of the input itself.
        #[arg(long)]
        q: Option<usize>,
        /// Number of random pairs for the constructive check; all pairs when omitted.
        #[arg(long)]
        pairs: Option<usize>,
    },
    /// Exact chromatic number.
    Chi {
        #[arg(long, alias = "graph")]
        input: String,
        #[arg(long, default_value_t = forge_core::graph::CHROMATIC_LIMIT)]
        limit: usize,
    },
    Girth {
        #[arg(long, alias = "graph")]
        input: String,
    },
    /// t(H,W) + t(H,1-W) - 2^(1-e(H)).
    Deficit {
        #[arg(long, alias = "input")]
        graph: String,
        /// Graphon JSON file, const:M:P or identity:M.
        #[arg(long)]
        graphon: String,
    },
    /// Compare t(q-book, W) with t(H, W)^q.
    Jensen {
        #[arg(long, alias = "input")]
        graph: String,
        #[arg(long, value_delimiter = ',')]
        iset: Vec<usize>,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        graphon: String,
    },
    /// Compare the analytic density gradient with central differences.
    GradientCheck {
        #[arg(long, alias = "input")]
        graph: String,
        #[arg(long)]
        graphon: String,
        #[arg(long, default_value_t = 1e-6)]
        step: f64,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Minimise the commonality deficit over step graphons.
    Search {
        #[arg(long, alias = "input")]
        graph: String,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        starts: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, default_value_t = 0.5)]
        shrink: f64,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Run the seeded invariant suite.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads.max(1)).build_global() {
        eprintln!("forge: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("forge: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
