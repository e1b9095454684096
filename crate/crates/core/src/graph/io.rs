use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::Result;

/// Wire form: `{"n": int, "edges": [[u,v],...], "labels": [...]?}`.
/// Unknown keys are ignored on read.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            labels: g.labels().map(<[String]>::to_vec),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = crate::Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let g = Graph::new(j.n, j.edges.into_iter().map(|[u, v]| (u, v)))?;
        match j.labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }
}

impl Graph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let j: GraphJson = serde_json::from_str(text)?;
        j.try_into()
    }

    /// Undirected DOT; labels (when present) become node names.
    pub fn to_dot(&self) -> String {
        let name = |v: usize| match self.labels() {
            Some(l) => format!("\"{}\"", l[v].replace('"', "\\\"")),
            None => v.to_string(),
        };
        let mut out = String::from("graph G {\n");
        for v in 0..self.n() {
            writeln!(out, "  {};", name(v)).unwrap();
        }
        for &(u, v) in self.edges() {
            writeln!(out, "  {} -- {};", name(u), name(v)).unwrap();
        }
        out.push_str("}\n");
        out
    }
}
