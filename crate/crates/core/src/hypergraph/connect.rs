//! `k` internally vertex-disjoint `u`–`v` hyperpaths in `H_q^r`, built by
//! induction on `r` with a case split on where `u` and `v` sit relative to
//! the slices `W_1, …, W_q` and `U_r`.

use super::slices::{route, slice_edge, RoutedPath};
use super::{validate_disjoint, BookpileHypergraph, HyperPath};
use crate::coords::{HyperEdge, LabeledVertex, ALPHA};
use crate::error::{input, Error, Result};
use crate::graph::Graph;

/// Smallest `q` for which the construction is guaranteed: `k` when `r = 2`,
/// otherwise the least multiple of 3 that is at least
/// `max(threshold_q(k, r-1), 3(k+1))`, which is `3(k+1)` for every `r >= 3`.
pub fn threshold_q(k: usize, r: usize) -> usize {
    match r {
        0..=2 => k,
        _ => {
            let m = threshold_q(k, r - 1).max(3 * (k + 1));
            m.div_ceil(3) * 3
        }
    }
}

/// `k` internally vertex-disjoint `u`–`v` paths, validated before returning.
pub fn connect(hg: &BookpileHypergraph, u: &LabeledVertex, v: &LabeledVertex, k: usize) -> Result<Vec<HyperPath>> {
    let need = threshold_q(k, hg.r());
    if (hg.q() as usize) < need {
        return input(format!("q = {} is below threshold_q({k}, {}) = {need}", hg.q(), hg.r()));
    }
    let paths = connect_unchecked(hg, u, v, k)?;
    if paths.len() < k {
        return Err(Error::Contradiction(format!("built {} of {k} paths from {u} to {v}", paths.len())));
    }
    if !validate_disjoint(&paths, u, v, hg.q(), hg.r())? {
        return Err(Error::Contradiction(format!("paths from {u} to {v} are not internally disjoint")));
    }
    Ok(paths)
}

/// Runs the construction without the threshold gate or the final
/// validation. Useful for probing below the threshold.
pub fn connect_unchecked(
    hg: &BookpileHypergraph,
    u: &LabeledVertex,
    v: &LabeledVertex,
    k: usize,
) -> Result<Vec<HyperPath>> {
    hg.check_vertex(u)?;
    hg.check_vertex(v)?;
    if u == v {
        return input("connect needs distinct endpoints");
    }
    if k == 0 {
        return input("k must be positive");
    }
    let mut paths = Builder { hg, q: hg.q(), k }.build(hg.r(), u, v)?;
    paths.truncate(k);
    Ok(paths)
}

struct Builder<'a> {
    hg: &'a BookpileHypergraph,
    q: u32,
    k: usize,
}

impl<'a> Builder<'a> {
    fn build(&mut self, r: usize, u: &LabeledVertex, v: &LabeledVertex) -> Result<Vec<HyperPath>> {
        if r == 2 {
            return Ok(self.bipartite(u, v));
        }
        let last = r - 1;
        match (u.alpha_bit() == last, v.alpha_bit() == last) {
            (true, true) => self.both_in_u(r, u, v),
            (true, false) => self.u_and_w(r, u, v),
            (false, true) => Ok(self.u_and_w(r, v, u)?.iter().map(HyperPath::reversed).collect()),
            (false, false) if u.coords()[last] == v.coords()[last] => self.same_slice(r, u, v),
            (false, false) => self.different_slices(r, u, v),
        }
    }

    fn product(&self, r: usize) -> Result<&'a Graph> {
        self.hg.product_graph(r)
    }

    /// `H_q^2` is `K_{q,q}`: `(a,α)` and `(α,b)` joined by the edge `(a,b)`.
    fn bipartite(&self, u: &LabeledVertex, v: &LabeledVertex) -> Vec<HyperPath> {
        let q = self.q;
        let lv = |c: [u32; 2]| LabeledVertex::new(c.to_vec()).unwrap();
        let e = |a: u32, b: u32| HyperEdge(vec![a, b]);
        if u.alpha_bit() == v.alpha_bit() {
            // common neighbours on the other side
            return (1..=q)
                .map(|x| {
                    let (mid, e1, e2) = if u.alpha_bit() == 1 {
                        let (a, a2) = (u.coords()[0], v.coords()[0]);
                        (lv([ALPHA, x]), e(a, x), e(a2, x))
                    } else {
                        let (b, b2) = (u.coords()[1], v.coords()[1]);
                        (lv([x, ALPHA]), e(x, b), e(x, b2))
                    };
                    HyperPath { vertices: vec![u.clone(), mid, v.clone()], edges: vec![e1, e2] }
                })
                .collect();
        }
        if u.alpha_bit() == 0 {
            return self.bipartite(v, u).iter().map(HyperPath::reversed).collect();
        }
        // u = (a,α), v = (α,b)
        let (a, b) = (u.coords()[0], v.coords()[1]);
        let mut out = vec![HyperPath { vertices: vec![u.clone(), v.clone()], edges: vec![e(a, b)] }];
        let others_a = (1..=q).filter(|&x| x != a);
        let others_b = (1..=q).filter(|&x| x != b);
        for (a2, b2) in others_a.zip(others_b) {
            out.push(HyperPath {
                vertices: vec![u.clone(), lv([ALPHA, b2]), lv([a2, ALPHA]), v.clone()],
                edges: vec![e(a, b2), e(a2, b2), e(a2, b)],
            });
        }
        out
    }

    /// Both endpoints in `W_i`: solve in `H_q^(r-1)` and re-attach coordinate `i`.
    fn same_slice(&mut self, r: usize, u: &LabeledVertex, v: &LabeledVertex) -> Result<Vec<HyperPath>> {
        let i = u.coords()[r - 1];
        let drop = |x: &LabeledVertex| LabeledVertex::new(x.coords()[..r - 1].to_vec()).unwrap();
        let inner = self.build(r - 1, &drop(u), &drop(v))?;
        let push = |c: &[u32]| {
            let mut c = c.to_vec();
            c.push(i);
            c
        };
        Ok(inner
            .into_iter()
            .map(|p| HyperPath {
                vertices: p.vertices.iter().map(|x| LabeledVertex::new(push(x.coords())).unwrap()).collect(),
                edges: p.edges.iter().map(|e| HyperEdge(push(e.coords()))).collect(),
            })
            .collect())
    }

    /// Length-2 fans out of the `U_r` vertex `from` into `slices`, ending at
    /// distinct `U_r` vertices outside `exclude`. Each fan is `from e_1 w e_2 t`
    /// with `e_1` the slice edge through `from`; `t` is the smallest-index
    /// unused neighbour of `w`.
    fn fans(&self, from: &LabeledVertex, slices: &[u32], exclude: &[LabeledVertex]) -> Result<Vec<HyperPath>> {
        let r = from.r();
        let mut taken: Vec<LabeledVertex> = exclude.to_vec();
        let mut out = Vec::with_capacity(slices.len());
        for &s in slices {
            let e1 = slice_edge(from, s);
            let fan = (0..r - 1).find_map(|p| {
                let w = LabeledVertex::planted(&e1, p);
                (1..=self.q).filter(|&x| x != e1.coords()[p]).find_map(|x| {
                    let e2 = w.fill(x);
                    let t = LabeledVertex::planted(&e2, r - 1);
                    (!taken.contains(&t))
                        .then(|| HyperPath { vertices: vec![from.clone(), w.clone(), t], edges: vec![e1.clone(), e2] })
                })
            });
            let fan =
                fan.ok_or_else(|| Error::Contradiction(format!("no free fan target from {from} in slice {s}")))?;
            taken.push(fan.end().clone());
            out.push(fan);
        }
        Ok(out)
    }

    /// Joins `routed` paths to the fans whose far ends they start/finish at.
    fn stitch(routed: &[RoutedPath], head: &[HyperPath], tail: &[HyperPath]) -> Result<Vec<HyperPath>> {
        routed
            .iter()
            .map(|rp| {
                let h = head.iter().find(|f| f.end() == &rp.start);
                let t = tail.iter().find(|f| f.start() == &rp.end);
                match (h, t) {
                    (Some(h), Some(t)) => Ok(h.clone().concat(&rp.path).concat(t)),
                    _ => Err(Error::Contradiction(format!("routed path {}..{} has no fan", rp.start, rp.end))),
                }
            })
            .collect()
    }

    /// `u, v ∈ U_r`: fans from `u` and from `v` into separate slice groups,
    /// joined through further slices by the `U`–`V` routing.
    fn both_in_u(&mut self, r: usize, u: &LabeledVertex, v: &LabeledVertex) -> Result<Vec<HyperPath>> {
        let k = self.k;
        let pool: Vec<u32> = (1..=self.q).collect();
        if pool.len() < 2 * k {
            return Err(Error::Contradiction(format!("q = {} leaves no room for {k} fans per side", self.q)));
        }
        let ends = [u.clone(), v.clone()];
        let from_u = self.fans(u, &pool[..k], &ends)?;
        let from_v = self.fans(v, &pool[k..2 * k], &ends)?;
        let us: Vec<_> = from_u.iter().map(|f| f.end().clone()).collect();
        let vs: Vec<_> = from_v.iter().map(|f| f.end().clone()).collect();
        let product = self.product(r)?;
        let routed = route(self.q, r, product, &us, &vs, &ends, k, &pool[2 * k..])?;
        let tails: Vec<HyperPath> = from_v.iter().map(HyperPath::reversed).collect();
        Self::stitch(&routed, &from_u, &tails)
    }

    /// `u ∈ U_r`, `v ∈ W_j`: fans from `u`, routed to the `U_r`-neighbours of
    /// `v`, finished by the slice-`j` edge into `v`. If `u` is itself a
    /// neighbour of `v` the direct edge is one of the paths.
    fn u_and_w(&mut self, r: usize, u: &LabeledVertex, v: &LabeledVertex) -> Result<Vec<HyperPath>> {
        let j = v.coords()[r - 1];
        let pool: Vec<u32> = (1..=self.q).filter(|&s| s != j).collect();
        let mut out = Vec::new();
        let mut tails = Vec::new();
        for e in v.fill_all(self.q) {
            let t = LabeledVertex::planted(&e, r - 1);
            if &t == u {
                out.push(HyperPath { vertices: vec![u.clone(), v.clone()], edges: vec![e] });
            } else {
                tails.push(HyperPath { vertices: vec![t, v.clone()], edges: vec![e] });
            }
        }
        let want = self.k.saturating_sub(out.len());
        if want == 0 {
            return Ok(out);
        }
        if pool.len() < 2 * want {
            return Err(Error::Contradiction(format!("q = {} leaves no room for {want} fans", self.q)));
        }
        let from_u = self.fans(u, &pool[..want], std::slice::from_ref(u))?;
        let us: Vec<_> = from_u.iter().map(|f| f.end().clone()).collect();
        let vs: Vec<_> = tails.iter().map(|t| t.start().clone()).collect();
        let product = self.product(r)?;
        let routed = route(self.q, r, product, &us, &vs, std::slice::from_ref(u), want, &pool[want..])?;
        out.extend(Self::stitch(&routed, &from_u, &tails)?);
        Ok(out)
    }

    /// `u ∈ W_i`, `v ∈ W_j`, `i != j`: route between their `U_r`-neighbourhoods
    /// through slices other than `i` and `j`.
    fn different_slices(&mut self, r: usize, u: &LabeledVertex, v: &LabeledVertex) -> Result<Vec<HyperPath>> {
        let (i, j) = (u.coords()[r - 1], v.coords()[r - 1]);
        let pool: Vec<u32> = (1..=self.q).filter(|&s| s != i && s != j).collect();
        let star = |x: &LabeledVertex| -> Vec<HyperPath> {
            x.fill_all(self.q)
                .into_iter()
                .map(|e| HyperPath { vertices: vec![x.clone(), LabeledVertex::planted(&e, r - 1)], edges: vec![e] })
                .collect()
        };
        let heads = star(u);
        let tails: Vec<HyperPath> = star(v).iter().map(HyperPath::reversed).collect();
        let us: Vec<_> = heads.iter().map(|h| h.end().clone()).collect();
        let vs: Vec<_> = tails.iter().map(|t| t.start().clone()).collect();
        let product = self.product(r)?;
        let routed = route(self.q, r, product, &us, &vs, &[], self.k, &pool)?;
        Self::stitch(&routed, &heads, &tails)
    }
}
