//! Step graphons with uniform blocks, homomorphism densities and the
//! commonality deficit.
//!
//! Every density is an exact finite sum over block maps, so the same code
//! runs over `f64`, `f32` or an exact rational type. Summation is split by
//! the block of the first vertex and the partial sums are always combined
//! in block order, which makes [`hom_density`] and [`hom_density_par`]
//! bit-identical.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bookpile::q_book;
use crate::error::{capacity, input, Error, Result};
use crate::graph::{Graph, VertexSet};

/// Numeric types the density code can run over.
pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + Debug + Send + Sync {}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + FromPrimitive + Debug + Send + Sync {}

/// Largest number of block maps `m^|V(h)|` a density evaluation will enumerate.
pub const DENSITY_CAPACITY: u64 = 100_000_000;

/// Largest edge count for which `2^(1-e)` is formed.
pub const MAX_DEFICIT_EDGES: usize = 60;

/// Slack allowed in `t(book) >= t(h)^q`.
pub const JENSEN_TOLERANCE: f64 = 1e-12;

/// Largest asymmetry the JSON reader will silently repair.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A symmetric `m x m` matrix of values in `[0, 1]` on `m` blocks of measure `1/m`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepGraphon<T = f64> {
    m: usize,
    values: Vec<T>,
}

impl<T: Scalar> StepGraphon<T> {
    /// Requires a square, exactly symmetric matrix with entries in `[0, 1]`.
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return input("a step graphon needs at least one block");
        }
        if let Some(a) = rows.iter().position(|r| r.len() != m) {
            return input(format!("row {a} has {} entries, expected {m}", rows[a].len()));
        }
        let values: Vec<T> = rows.into_iter().flatten().collect();
        let w = StepGraphon { m, values };
        for a in 0..m {
            for b in 0..m {
                let x = w.get(a, b);
                if *x < T::zero() || *x > T::one() {
                    return input(format!("entry ({a},{b}) = {x:?} is outside [0,1]"));
                }
                if b > a && *x != *w.get(b, a) {
                    return input(format!("entries ({a},{b}) and ({b},{a}) differ"));
                }
            }
        }
        Ok(w)
    }

    pub fn constant(m: usize, p: T) -> Result<Self> {
        StepGraphon::new(vec![vec![p; m]; m])
    }

    /// 1 on diagonal blocks, 0 elsewhere.
    pub fn block_identity(m: usize) -> Self {
        let values = (0..m * m).map(|i| if i / m == i % m { T::one() } else { T::zero() }).collect();
        StepGraphon { m, values }
    }

    /// Builds from the upper triangle `(0,0), (0,1), .., (0,m-1), (1,1), ..` in row order.
    pub fn from_upper(m: usize, params: &[T]) -> Result<Self> {
        if params.len() != m * (m + 1) / 2 {
            return input(format!("{} parameters for m = {m}", params.len()));
        }
        let mut rows = vec![vec![T::zero(); m]; m];
        let mut it = params.iter();
        for a in 0..m {
            for b in a..m {
                let x = it.next().unwrap().clone();
                rows[a][b] = x.clone();
                rows[b][a] = x;
            }
        }
        StepGraphon::new(rows)
    }

    /// The upper triangle in the order used by [`StepGraphon::from_upper`].
    pub fn upper(&self) -> Vec<T> {
        (0..self.m).flat_map(|a| (a..self.m).map(move |b| (a, b))).map(|(a, b)| self.get(a, b).clone()).collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, a: usize, b: usize) -> &T {
        &self.values[a * self.m + b]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.values.chunks(self.m).map(|r| r.to_vec()).collect()
    }

    /// Entrywise `1 - W`.
    pub fn complement(&self) -> Self {
        StepGraphon { m: self.m, values: self.values.iter().map(|x| T::one() - x.clone()).collect() }
    }

    /// Splits every block into `k` equal sub-blocks carrying the same value.
    pub fn refine(&self, k: usize) -> Self {
        let m = self.m * k;
        let values = (0..m * m).map(|i| self.get(i / m / k, i % m / k).clone()).collect();
        StepGraphon { m, values }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphonJson {
    m: usize,
    values: Vec<Vec<f64>>,
}

impl StepGraphon<f64> {
    /// Averages `(a,b)` and `(b,a)` when they differ by at most
    /// [`SYMMETRY_TOLERANCE`]; larger asymmetry is an input error.
    pub fn from_rows_symmetrizing(mut rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return input("graphon values must form a square matrix");
        }
        for a in 0..m {
            for b in a + 1..m {
                let (x, y) = (rows[a][b], rows[b][a]);
                if (x - y).abs() > SYMMETRY_TOLERANCE {
                    return input(format!("values[{a}][{b}] = {x} but values[{b}][{a}] = {y}"));
                }
                let mean = 0.5 * (x + y);
                rows[a][b] = mean;
                rows[b][a] = mean;
            }
        }
        StepGraphon::new(rows)
    }

    /// Reads `{"m": .., "values": [[..], ..]}`; other keys are ignored.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphonJson = serde_json::from_str(text)?;
        if raw.values.len() != raw.m {
            return input(format!("m = {} but {} rows given", raw.m, raw.values.len()));
        }
        StepGraphon::from_rows_symmetrizing(raw.values)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(GraphonJson { m: self.m, values: self.rows() }).expect("plain data")
    }

    /// Upper triangle uniform on `[0,1]`, mirrored below the diagonal.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let params: Vec<f64> = (0..m * (m + 1) / 2).map(|_| rng.gen::<f64>()).collect();
        StepGraphon::from_upper(m, &params).expect("uniform samples lie in [0,1]")
    }
}

/// Vertex order in which every vertex after the first of its component has
/// an earlier neighbour, with the earlier neighbours listed per position.
struct Plan {
    order: Vec<usize>,
    back: Vec<Vec<usize>>,
}

impl Plan {
    fn new(h: &Graph) -> Plan {
        let n = h.n();
        let mut pos = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if pos[root] != usize::MAX {
                continue;
            }
            pos[root] = order.len();
            order.push(root);
            let mut head = order.len() - 1;
            while head < order.len() {
                let x = order[head];
                head += 1;
                for &y in h.neighbors(x) {
                    if pos[y] == usize::MAX {
                        pos[y] = order.len();
                        order.push(y);
                    }
                }
            }
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &x)| h.neighbors(x).iter().map(|&y| pos[y]).filter(|&p| p < i).collect())
            .collect();
        Plan { order, back }
    }

    fn sum_from<T: Scalar>(&self, w: &StepGraphon<T>, first: usize) -> T {
        let mut map = vec![0; self.order.len()];
        map[0] = first;
        let mut acc = T::zero();
        self.dfs(w, 1, &mut map, T::one(), &mut acc);
        acc
    }

    fn dfs<T: Scalar>(&self, w: &StepGraphon<T>, depth: usize, map: &mut [usize], prefix: T, acc: &mut T) {
        if depth == map.len() {
            *acc = acc.clone() + prefix;
            return;
        }
        for b in 0..w.m {
            let mut f = prefix.clone();
            for &p in &self.back[depth] {
                f = f * w.get(map[p], b).clone();
                if f.is_zero() {
                    break;
                }
            }
            if f.is_zero() {
                continue;
            }
            map[depth] = b;
            self.dfs(w, depth + 1, map, f, acc);
        }
    }
}

fn check_capacity(n: usize, m: usize) -> Result<u64> {
    match (m as u64).checked_pow(n as u32) {
        Some(c) if c <= DENSITY_CAPACITY => Ok(c),
        _ => capacity(format!("{m}^{n} block maps exceed the limit of {DENSITY_CAPACITY}")),
    }
}

fn scalar<T: Scalar>(x: u64) -> T {
    T::from_u64(x).expect("scalar type represents small integers")
}

fn density_with<T: Scalar>(h: &Graph, w: &StepGraphon<T>, parallel: bool) -> Result<T> {
    let total = check_capacity(h.n(), w.m)?;
    if h.n() == 0 {
        return Ok(T::one());
    }
    let plan = Plan::new(h);
    let parts: Vec<T> = if parallel {
        (0..w.m).into_par_iter().map(|a| plan.sum_from(w, a)).collect()
    } else {
        (0..w.m).map(|a| plan.sum_from(w, a)).collect()
    };
    let sum = parts.into_iter().fold(T::zero(), |s, x| s + x);
    Ok(sum / scalar(total))
}

/// `t(h, W)`: the average over all maps `V(h) -> blocks` of the product of
/// the block values on the edges of `h`.
pub fn hom_density<T: Scalar>(h: &Graph, w: &StepGraphon<T>) -> Result<T> {
    density_with(h, w, false)
}

/// [`hom_density`] with the first-vertex blocks spread over the rayon pool.
pub fn hom_density_par<T: Scalar>(h: &Graph, w: &StepGraphon<T>) -> Result<T> {
    density_with(h, w, true)
}

/// `2^(1-e)`, formed by exact halving.
pub fn random_coloring_density<T: Scalar>(e: usize) -> Result<T> {
    if e > MAX_DEFICIT_EDGES {
        return capacity(format!("e(H) = {e} exceeds {MAX_DEFICIT_EDGES}"));
    }
    let two = T::one() + T::one();
    let mut p = two.clone();
    for _ in 0..e {
        p = p / two.clone();
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport<T = f64> {
    pub t_w: T,
    pub t_comp: T,
    /// `t_w + t_comp - 2^(1-e(h))`; negative means `W` shows `h` is uncommon.
    pub deficit: T,
}

pub fn commonality_deficit<T: Scalar>(h: &Graph, w: &StepGraphon<T>) -> Result<DensityReport<T>> {
    deficit_with(h, w, false)
}

pub fn commonality_deficit_par<T: Scalar>(h: &Graph, w: &StepGraphon<T>) -> Result<DensityReport<T>> {
    deficit_with(h, w, true)
}

fn deficit_with<T: Scalar>(h: &Graph, w: &StepGraphon<T>, parallel: bool) -> Result<DensityReport<T>> {
    let base = random_coloring_density::<T>(h.edge_count())?;
    let t_w = density_with(h, w, parallel)?;
    let t_comp = density_with(h, &w.complement(), parallel)?;
    let deficit = t_w.clone() + t_comp.clone() - base;
    Ok(DensityReport { t_w, t_comp, deficit })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenReport<T = f64> {
    /// `t(q_book(h, i, q), W)`.
    pub lhs: T,
    /// `t(h, W)^q`.
    pub rhs: T,
    pub ok: bool,
}

/// Compares the density of the `q`-book of `h` along `i` with the `q`-th
/// power of the density of `h`.
pub fn jensen_check<T: Scalar>(h: &Graph, i: &VertexSet, q: usize, w: &StepGraphon<T>) -> Result<JensenReport<T>> {
    let book = q_book(h, i, q)?;
    check_capacity(book.n(), w.m)?;
    let lhs = hom_density(&book, w)?;
    let t = hom_density(h, w)?;
    let rhs = (0..q).fold(T::one(), |p, _| p * t.clone());
    let tol = T::from_f64(JENSEN_TOLERANCE).unwrap_or_else(T::zero);
    let ok = lhs >= rhs.clone() - tol;
    Ok(JensenReport { lhs, rhs, ok })
}

/// Partial derivatives of `t(h, W)` with respect to the upper-triangular
/// parameters, returned as a symmetric matrix: entry `(a,b)` with `a != b`
/// is the derivative along the direction that moves both `(a,b)` and `(b,a)`.
pub fn density_gradient<T: Scalar>(h: &Graph, w: &StepGraphon<T>) -> Result<Vec<Vec<T>>> {
    let total = check_capacity(h.n(), w.m)?;
    let m = w.m;
    let mut raw = vec![T::zero(); m * m];
    let edges = h.edges();
    if !edges.is_empty() {
        let n = h.n();
        let mut map = vec![0usize; n];
        let mut prefix = vec![T::one(); edges.len() + 1];
        let mut suffix = vec![T::one(); edges.len() + 1];
        for _ in 0..total {
            for (k, &(x, y)) in edges.iter().enumerate() {
                prefix[k + 1] = prefix[k].clone() * w.get(map[x], map[y]).clone();
            }
            for (k, &(x, y)) in edges.iter().enumerate().rev() {
                suffix[k] = suffix[k + 1].clone() * w.get(map[x], map[y]).clone();
            }
            for (k, &(x, y)) in edges.iter().enumerate() {
                let slot = &mut raw[map[x] * m + map[y]];
                *slot = slot.clone() + prefix[k].clone() * suffix[k + 1].clone();
            }
            for d in map.iter_mut() {
                *d += 1;
                if *d < m {
                    break;
                }
                *d = 0;
            }
        }
    }
    let norm: T = scalar(total);
    Ok((0..m)
        .map(|a| {
            (0..m)
                .map(|b| {
                    let g =
                        if a == b { raw[a * m + a].clone() } else { raw[a * m + b].clone() + raw[b * m + a].clone() };
                    g / norm.clone()
                })
                .collect()
        })
        .collect())
}

/// Gradient of `t(h,W) + t(h,1-W)` in the upper-triangular parameters,
/// in the order of [`StepGraphon::upper`].
pub fn objective_gradient<T: Scalar>(h: &Graph, w: &StepGraphon<T>) -> Result<Vec<T>> {
    let g = density_gradient(h, w)?;
    let gc = density_gradient(h, &w.complement())?;
    let m = w.m;
    Ok((0..m).flat_map(|a| (a..m).map(move |b| (a, b))).map(|(a, b)| g[a][b].clone() - gc[a][b].clone()).collect())
}

impl<T: Scalar> TryFrom<Vec<Vec<T>>> for StepGraphon<T> {
    type Error = Error;

    fn try_from(rows: Vec<Vec<T>>) -> Result<Self> {
        StepGraphon::new(rows)
    }
}
