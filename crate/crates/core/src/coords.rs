//! Coordinate labels shared by bookpile graphs and their hypergraph of
//! standard copies: vertices are `r`-tuples over `1..=q` with exactly one
//! wildcard entry, hyperedges are plain `r`-tuples over `1..=q`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Coordinate value standing for the wildcard α.
pub const ALPHA: u32 = 0;

/// An `r`-tuple over `{1..q} ∪ {α}` with exactly one α entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledVertex {
    coords: Vec<u32>,
    alpha_bit: usize,
}

impl LabeledVertex {
    /// `coords` uses [`ALPHA`] for the wildcard.
    pub fn new(coords: Vec<u32>) -> Result<Self> {
        let mut alphas = coords.iter().enumerate().filter(|(_, &c)| c == ALPHA).map(|(i, _)| i);
        match (alphas.next(), alphas.next()) {
            (Some(alpha_bit), None) => Ok(LabeledVertex { coords, alpha_bit }),
            _ => Err(Error::Structural(format!("label {} must contain exactly one α", fmt_tuple(&coords)))),
        }
    }

    /// The vertex of `edge` whose wildcard sits at `pos`.
    pub fn planted(edge: &HyperEdge, pos: usize) -> Self {
        let mut coords = edge.0.clone();
        coords[pos] = ALPHA;
        LabeledVertex { coords, alpha_bit: pos }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn alpha_bit(&self) -> usize {
        self.alpha_bit
    }

    pub fn r(&self) -> usize {
        self.coords.len()
    }

    /// The hyperedge obtained by substituting `value` for α.
    pub fn fill(&self, value: u32) -> HyperEdge {
        let mut c = self.coords.clone();
        c[self.alpha_bit] = value;
        HyperEdge(c)
    }

    /// The `q` edges through this vertex, in order of the substituted value.
    pub fn fill_all(&self, q: u32) -> Vec<HyperEdge> {
        (1..=q).map(|x| self.fill(x)).collect()
    }

    /// Whether this vertex lies in `edge`.
    pub fn incident(&self, edge: &HyperEdge) -> bool {
        self.coords.len() == edge.0.len() && self.coords.iter().zip(&edge.0).all(|(&a, &b)| a == ALPHA || a == b)
    }

    /// Agreement on every position that is non-α in both labels.
    pub fn shares_fixed_bits(&self, other: &LabeledVertex) -> bool {
        self.coords.iter().zip(&other.coords).all(|(&a, &b)| a == ALPHA || b == ALPHA || a == b)
    }

    /// Dense index in `0..r·q^(r-1)`: α position first, then the remaining
    /// coordinates in mixed radix.
    pub fn index(&self, q: u32) -> usize {
        let r = self.coords.len();
        let rest = self
            .coords
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.alpha_bit)
            .fold(0usize, |acc, (_, &c)| acc * q as usize + (c - 1) as usize);
        self.alpha_bit * (q as usize).pow(r as u32 - 1) + rest
    }

    pub fn from_index(q: u32, r: usize, idx: usize) -> Self {
        let block = (q as usize).pow(r as u32 - 1);
        let alpha_bit = idx / block;
        let mut rest = idx % block;
        let mut coords = vec![ALPHA; r];
        for i in (0..r).rev() {
            if i == alpha_bit {
                continue;
            }
            coords[i] = (rest % q as usize) as u32 + 1;
            rest /= q as usize;
        }
        LabeledVertex { coords, alpha_bit }
    }

    pub(crate) fn check_range(&self, q: u32, r: usize) -> Result<()> {
        if self.coords.len() != r || self.coords.iter().any(|&c| c > q) {
            return Err(Error::Structural(format!("label {self} is not a vertex of H_{q}^{r}")));
        }
        Ok(())
    }
}

impl fmt::Display for LabeledVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_tuple(&self.coords))
    }
}

impl FromStr for LabeledVertex {
    type Err = Error;

    /// Accepts `(2,α,1)`; `a`, `alpha` and `*` also denote the wildcard.
    fn from_str(s: &str) -> Result<Self> {
        LabeledVertex::new(parse_tuple(s)?)
    }
}

/// An element of `[q]^r`, i.e. one hyperedge (one standard copy).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperEdge(pub Vec<u32>);

impl HyperEdge {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn index(&self, q: u32) -> usize {
        self.0.iter().fold(0usize, |acc, &c| acc * q as usize + (c - 1) as usize)
    }

    pub fn from_index(q: u32, r: usize, mut idx: usize) -> Self {
        let mut coords = vec![0; r];
        for c in coords.iter_mut().rev() {
            *c = (idx % q as usize) as u32 + 1;
            idx /= q as usize;
        }
        HyperEdge(coords)
    }

    /// The `r` vertices of this edge, the `i`-th carrying α at position `i`.
    pub fn vertices(&self) -> impl Iterator<Item = LabeledVertex> + '_ {
        (0..self.0.len()).map(move |p| LabeledVertex::planted(self, p))
    }

    /// Shared vertex of two edges of a linear hypergraph: they meet iff they
    /// differ in exactly one position.
    pub fn meet(&self, other: &HyperEdge) -> Option<LabeledVertex> {
        let mut diff = self.0.iter().zip(&other.0).enumerate().filter(|(_, (a, b))| a != b);
        match (diff.next(), diff.next()) {
            (Some((p, _)), None) => Some(LabeledVertex::planted(self, p)),
            _ => None,
        }
    }

    pub(crate) fn check_range(&self, q: u32, r: usize) -> Result<()> {
        if self.0.len() != r || self.0.iter().any(|&c| c == 0 || c > q) {
            return Err(Error::Structural(format!("{self} is not an edge of H_{q}^{r}")));
        }
        Ok(())
    }
}

impl fmt::Display for HyperEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_tuple(&self.0))
    }
}

impl FromStr for HyperEdge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let c = parse_tuple(s)?;
        if c.contains(&ALPHA) {
            return Err(Error::Structural(format!("edge '{s}' may not contain α")));
        }
        Ok(HyperEdge(c))
    }
}

fn fmt_tuple(c: &[u32]) -> String {
    let parts: Vec<String> = c.iter().map(|&x| if x == ALPHA { "α".to_string() } else { x.to_string() }).collect();
    format!("({})", parts.join(","))
}

fn parse_tuple(s: &str) -> Result<Vec<u32>> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|tok| match tok.trim() {
            "α" | "a" | "alpha" | "*" => Ok(ALPHA),
            t => match t.parse::<u32>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(Error::Input(format!("bad coordinate '{t}' in '{s}'"))),
            },
        })
        .collect()
}
