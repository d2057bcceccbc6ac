//! Hyperbolic-disk AS topology generator.
//!
//! Nodes are placed quasi-uniformly on a hyperbolic disk of radius `R`.
//! Taken in order of increasing radius, each node either joins the tier-1
//! clique `K` (peering with every member) or becomes the customer of its
//! hyperbolically nearest already placed node. A second pass then adds a peer
//! edge between every not yet linked pair closer than `β·R`.

use std::f64::consts::{PI, TAU};

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{LabeledAsGraph, NodeId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum YeasError {
    #[error("node count must be at least 1")]
    NoNodes,
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParam { name: &'static str, value: f64, reason: &'static str },
    #[error("no clique-size parameter gives |K| = {target} (closest reached: {closest})")]
    CalibrationFailed { target: usize, closest: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct YeasParams {
    pub n: usize,
    /// Clique-size control.
    pub q: f64,
    /// Layout heterogeneity, `0.5 < alpha <= 1`.
    pub alpha: f64,
    /// Peering willingness, `0 < beta < 1`.
    pub beta: f64,
    pub radius: f64,
    pub seed: u64,
}

impl YeasParams {
    pub fn validate(&self) -> Result<(), YeasError> {
        let bad = |name, value, reason| Err(YeasError::InvalidParam { name, value, reason });
        if self.n == 0 {
            return Err(YeasError::NoNodes);
        }
        if !(self.alpha > 0.5 && self.alpha <= 1.0) {
            return bad("alpha", self.alpha, "must lie in (0.5, 1]");
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad("beta", self.beta, "must lie in (0, 1)");
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad("radius", self.radius, "must be positive and finite");
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return bad("q", self.q, "must be positive and finite");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    pub r: f64,
    pub phi: f64,
}

/// Radial coordinate for a uniform draw `u1 ∈ (0, 1)`; inverse of the CDF
/// `(cosh(αr) − 1) / (cosh(αR) − 1)`.
pub fn radial_coordinate(u1: f64, alpha: f64, radius: f64) -> f64 {
    let r = (1.0 + ((alpha * radius).cosh() - 1.0) * u1).acosh() / alpha;
    r.clamp(0.0, radius)
}

pub fn sample_point<R: Rng + ?Sized>(params: &YeasParams, rng: &mut R) -> HyperbolicPoint {
    let u1: f64 = rng.sample(Open01);
    let u2: f64 = rng.sample(Open01);
    let phi = TAU * u2;
    HyperbolicPoint {
        r: radial_coordinate(u1, params.alpha, params.radius),
        phi: if phi >= TAU { 0.0 } else { phi },
    }
}

/// `cosh` of the hyperbolic distance, in the cancellation-free form
/// `cosh(r_a − r_b) + 2 sinh r_a sinh r_b sin²(Δφ/2)`.
#[inline]
fn cosh_dist(a: &HyperbolicPoint, b: &HyperbolicPoint) -> f64 {
    let s = ((a.phi - b.phi) * 0.5).sin();
    (a.r - b.r).cosh() + 2.0 * a.r.sinh() * b.r.sinh() * s * s
}

/// Hyperbolic distance (law of cosines).
pub fn hdist(a: &HyperbolicPoint, b: &HyperbolicPoint) -> f64 {
    cosh_dist(a, b).max(1.0).acosh()
}

/// How the clique-membership test compares the summed distance to `K`
/// against the nearest placed node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CliqueRule {
    /// Join `K` iff `Σ_{v∈K} l(w,v) < Q · min_v l(w,v)`.
    #[default]
    SumBelowScaledMin,
    /// Join `K` iff `Q · Σ_{v∈K} l(w,v) < min_v l(w,v)`. Freezes `|K|` at 1
    /// for `Q ≥ 1`.
    Literal,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PeeringScan {
    /// Radial bands sorted by angle; only an exact angular window is scanned.
    #[default]
    Sectors,
    /// Every pair. Quadratic; for cross-checking.
    BruteForce,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct YeasOptions {
    pub rule: CliqueRule,
    pub scan: PeeringScan,
}

#[derive(Clone, Debug)]
pub struct YeasOutput {
    pub graph: LabeledAsGraph,
    /// Tier-1 clique, sorted ascending.
    pub clique: Vec<NodeId>,
    /// Coordinates indexed by node id.
    pub coords: Vec<HyperbolicPoint>,
}

/// Sampled coordinates plus everything phase 1 needs that does not depend
/// on `Q`: the radius order and each node's nearest earlier node.
pub struct Layout {
    coords: Vec<HyperbolicPoint>,
    order: Vec<NodeId>,
    /// Indexed by position in `order`; entry 0 is unused.
    nearest: Vec<(NodeId, f64)>,
}

impl Layout {
    pub fn sample(params: &YeasParams) -> Result<Self, YeasError> {
        params.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let coords: Vec<HyperbolicPoint> =
            (0..params.n).map(|_| sample_point(params, &mut rng)).collect();
        Ok(Self::from_coords(coords))
    }

    pub fn from_coords(coords: Vec<HyperbolicPoint>) -> Self {
        let mut order: Vec<NodeId> = (0..coords.len() as NodeId).collect();
        order.sort_by(|&a, &b| {
            coords[a as usize].r.total_cmp(&coords[b as usize].r).then(a.cmp(&b))
        });
        let nearest = nearest_predecessors(&coords, &order);
        Layout { coords, order, nearest }
    }

    pub fn coords(&self) -> &[HyperbolicPoint] {
        &self.coords
    }

    /// Radius order with ties broken by id.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// Clique membership and provider assignment for a given `Q`.
    fn phase_one(&self, q: f64, rule: CliqueRule) -> PhaseOne {
        let n = self.coords.len();
        let mut clique = vec![self.order[0]];
        let mut provider: Vec<Option<NodeId>> = vec![None; n];
        for (pos, &w) in self.order.iter().enumerate().skip(1) {
            let (near, dmin) = self.nearest[pos];
            let pw = &self.coords[w as usize];
            let sum: f64 = clique.iter().map(|&k| hdist(pw, &self.coords[k as usize])).sum();
            let joins = match rule {
                CliqueRule::SumBelowScaledMin => sum < q * dmin,
                CliqueRule::Literal => q * sum < dmin,
            };
            if joins {
                clique.push(w);
            } else {
                provider[w as usize] = Some(near);
            }
        }
        PhaseOne { clique, provider }
    }

    /// `|K|` produced by a given `Q`.
    pub fn clique_size(&self, q: f64, rule: CliqueRule) -> usize {
        self.phase_one(q, rule).clique.len()
    }
}

struct PhaseOne {
    /// In joining order.
    clique: Vec<NodeId>,
    provider: Vec<Option<NodeId>>,
}

/// For every node after the first (in radius order), the earlier node at
/// minimum hyperbolic distance, ties to the smaller id.
fn nearest_predecessors(coords: &[HyperbolicPoint], order: &[NodeId]) -> Vec<(NodeId, f64)> {
    // Screening uses the fast (cancellation-prone) form
    // ch_w ch_v − sh_w sh_v cos Δφ; candidates within its error band are
    // re-ranked with the exact distance.
    let pre: Vec<[f64; 3]> = order
        .iter()
        .map(|&v| {
            let p = &coords[v as usize];
            let (sh, ch) = (p.r.sinh(), p.r.cosh());
            [ch, sh * p.phi.cos(), sh * p.phi.sin()]
        })
        .collect();
    (0..order.len())
        .into_par_iter()
        .map(|pos| {
            if pos == 0 {
                return (order[0], 0.0);
            }
            let w = pre[pos];
            let fast = |v: &[f64; 3]| w[0] * v[0] - (w[1] * v[1] + w[2] * v[2]);
            let mut best = f64::INFINITY;
            let mut ch_max = 0.0f64;
            for v in &pre[..pos] {
                best = best.min(fast(v));
                ch_max = ch_max.max(v[0]);
            }
            let tol = 64.0 * f64::EPSILON * w[0] * ch_max;
            let pw = &coords[order[pos] as usize];
            let mut pick: Option<(f64, NodeId)> = None;
            for (i, v) in pre[..pos].iter().enumerate() {
                if fast(v) <= best + tol {
                    let id = order[i];
                    let d = hdist(pw, &coords[id as usize]);
                    pick = match pick {
                        Some((bd, bid)) if bd < d || (bd == d && bid < id) => Some((bd, bid)),
                        _ => Some((d, id)),
                    };
                }
            }
            let (d, id) = pick.expect("at least one earlier node");
            (id, d)
        })
        .collect()
}

pub fn generate(params: &YeasParams) -> Result<YeasOutput, YeasError> {
    generate_with(params, YeasOptions::default())
}

pub fn generate_with(params: &YeasParams, opts: YeasOptions) -> Result<YeasOutput, YeasError> {
    let layout = Layout::sample(params)?;
    Ok(build(&layout, params, opts))
}

/// Both phases on a prepared layout.
pub fn build(layout: &Layout, params: &YeasParams, opts: YeasOptions) -> YeasOutput {
    let n = layout.coords.len();
    let p1 = layout.phase_one(params.q, opts.rule);
    let mut in_clique = vec![false; n];
    for &k in &p1.clique {
        in_clique[k as usize] = true;
    }
    let mut peer_edges = Vec::new();
    for (i, &a) in p1.clique.iter().enumerate() {
        for &b in &p1.clique[..i] {
            peer_edges.push((a.min(b), a.max(b)));
        }
    }
    let cp_edges: Vec<(NodeId, NodeId)> = (0..n as NodeId)
        .filter_map(|w| p1.provider[w as usize].map(|p| (w, p)))
        .collect();

    let linked = |u: NodeId, v: NodeId| {
        p1.provider[u as usize] == Some(v)
            || p1.provider[v as usize] == Some(u)
            || (in_clique[u as usize] && in_clique[v as usize])
    };
    let threshold = params.beta * params.radius;
    let extra = match opts.scan {
        PeeringScan::Sectors => peering_pairs_sectors(&layout.coords, threshold, &linked),
        PeeringScan::BruteForce => peering_pairs_brute(&layout.coords, threshold, &linked),
    };
    peer_edges.extend(extra);
    let mut clique = p1.clique;
    clique.sort_unstable();
    YeasOutput {
        graph: LabeledAsGraph::from_sorted_parts(n, peer_edges, cp_edges),
        clique,
        coords: layout.coords.clone(),
    }
}

fn peering_pairs_brute(
    coords: &[HyperbolicPoint],
    threshold: f64,
    linked: &(dyn Fn(NodeId, NodeId) -> bool + Sync),
) -> Vec<(NodeId, NodeId)> {
    let n = coords.len() as NodeId;
    (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            (u + 1..n).filter_map(move |v| {
                (!linked(u, v) && hdist(&coords[u as usize], &coords[v as usize]) < threshold)
                    .then_some((u, v))
            })
        })
        .collect()
}

const BAND_WIDTH: f64 = 0.5;

struct Band {
    lo: f64,
    hi: f64,
    /// `(phi, id)` sorted by angle.
    members: Vec<(f64, NodeId)>,
}

fn peering_pairs_sectors(
    coords: &[HyperbolicPoint],
    threshold: f64,
    linked: &(dyn Fn(NodeId, NodeId) -> bool + Sync),
) -> Vec<(NodeId, NodeId)> {
    let r_max = coords.iter().map(|p| p.r).fold(0.0, f64::max);
    let band_count = ((r_max / BAND_WIDTH).floor() as usize) + 1;
    let mut bands: Vec<Band> = (0..band_count)
        .map(|b| Band {
            lo: b as f64 * BAND_WIDTH,
            hi: (b + 1) as f64 * BAND_WIDTH,
            members: Vec::new(),
        })
        .collect();
    for (id, p) in coords.iter().enumerate() {
        let b = ((p.r / BAND_WIDTH).floor() as usize).min(band_count - 1);
        bands[b].members.push((p.phi, id as NodeId));
    }
    for b in &mut bands {
        b.members.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    }
    let cosh_t = threshold.cosh();
    let n = coords.len() as NodeId;
    let mut pairs: Vec<(NodeId, NodeId)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let pu = coords[u as usize];
            let (ch_u, sh_u) = (pu.r.cosh(), pu.r.sinh());
            let mut found = Vec::new();
            let mut visit = |v: NodeId| {
                if v > u
                    && !linked(u, v)
                    && hdist(&pu, &coords[v as usize]) < threshold
                {
                    found.push((u, v));
                }
            };
            for band in &bands {
                if band.members.is_empty() {
                    continue;
                }
                match angular_reach(ch_u, sh_u, cosh_t, band.lo, band.hi) {
                    Reach::Nothing => {}
                    Reach::All => band.members.iter().for_each(|&(_, v)| visit(v)),
                    Reach::Within(delta) => scan_window(&band.members, pu.phi, delta, &mut visit),
                }
            }
            found
        })
        .collect();
    pairs.sort_unstable();
    pairs
}

enum Reach {
    Nothing,
    All,
    Within(f64),
}

/// Largest angular offset at which a point with radius in `[lo, hi]` can lie
/// within distance `T` of a point with `(cosh r_u, sinh r_u)`.
///
/// `d < T ⇔ cos Δφ > f(r_v) = (ch_u ch_v − cosh T) / (sh_u sh_v)`, and `f`
/// is minimized at `cosh r_v = ch_u / cosh T`, so the band bound is `f` at
/// that radius clamped into the band.
fn angular_reach(ch_u: f64, sh_u: f64, cosh_t: f64, lo: f64, hi: f64) -> Reach {
    let r_star = if ch_u >= cosh_t { (ch_u / cosh_t).acosh() } else { 0.0 };
    let r = r_star.clamp(lo, hi);
    let denom = sh_u * r.sinh();
    if denom <= 0.0 {
        return Reach::All;
    }
    let f = (ch_u * r.cosh() - cosh_t) / denom;
    if !f.is_finite() || f <= -1.0 {
        Reach::All
    } else if f > 1.0 + 1e-9 {
        Reach::Nothing
    } else {
        let delta = (f - 1e-9).clamp(-1.0, 1.0).acos() + 1e-9;
        if delta >= PI {
            Reach::All
        } else {
            Reach::Within(delta)
        }
    }
}

fn scan_window(members: &[(f64, NodeId)], phi: f64, delta: f64, visit: &mut impl FnMut(NodeId)) {
    let lo = phi - delta;
    let hi = phi + delta;
    let mut range = |a: f64, b: f64| {
        let start = members.partition_point(|m| m.0 < a);
        for &(p, v) in &members[start..] {
            if p > b {
                break;
            }
            visit(v);
        }
    };
    if lo < 0.0 {
        range(0.0, hi);
        range(lo + TAU, TAU);
    } else if hi > TAU {
        range(lo, TAU);
        range(0.0, hi - TAU);
    } else {
        range(lo, hi);
    }
}

/// Finds a `Q` for which phase 1 yields exactly `target` clique members and
/// returns the midpoint of that plateau.
pub fn calibrate_q(layout: &Layout, target: usize, rule: CliqueRule) -> Result<f64, YeasError> {
    let size = |q: f64| layout.clique_size(q, rule);
    let n = layout.coords.len();
    if target == 0 || target > n {
        return Err(YeasError::CalibrationFailed { target, closest: size(1.0) });
    }
    // Smallest q reaching at least `target`.
    let mut lo = 1e-6;
    let mut hi = 1.0;
    let mut guard = 0;
    while size(hi) < target {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(YeasError::CalibrationFailed { target, closest: size(hi) });
        }
    }
    if size(lo) >= target {
        lo = 0.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if size(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    let start = hi;
    let got = size(start);
    if got != target {
        return Err(YeasError::CalibrationFailed { target, closest: got });
    }
    // Upper end of the plateau.
    let mut lo2 = start;
    let mut hi2 = start * 2.0;
    guard = 0;
    while size(hi2) <= target {
        lo2 = hi2;
        hi2 *= 2.0;
        guard += 1;
        if guard > 60 {
            return Ok(lo2);
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo2 + hi2);
        if size(mid) <= target {
            lo2 = mid;
        } else {
            hi2 = mid;
        }
        if hi2 - lo2 <= 1e-12 * hi2 {
            break;
        }
    }
    let q = 0.5 * (start + lo2);
    if size(q) == target {
        Ok(q)
    } else {
        Ok(start)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, seed: u64) -> YeasParams {
        YeasParams { n, q: 20.0, alpha: 0.55, beta: 0.7, radius: 18.5, seed }
    }

    #[test]
    fn radial_boundaries() {
        assert!(radial_coordinate(1e-300, 0.55, 18.5) < 1e-6);
        assert!((radial_coordinate(1.0 - 1e-16, 0.55, 18.5) - 18.5).abs() < 1e-6);
        let r = radial_coordinate(0.5, 1.0, 10.0);
        assert!((r - 9.30694360899537).abs() < 1e-10, "{r}");
    }

    #[test]
    fn distance_identities() {
        let a = HyperbolicPoint { r: 3.0, phi: 1.0 };
        assert_eq!(hdist(&a, &a), 0.0);
        let b = HyperbolicPoint { r: 5.5, phi: 1.0 };
        assert!((hdist(&a, &b) - 2.5).abs() < 1e-12);
        let c = HyperbolicPoint { r: 3.0, phi: 1.0 + PI };
        assert!((hdist(&a, &c) - 6.0).abs() < 1e-9);
    }

    #[test]
    fn single_node() {
        let out = generate(&params(1, 3)).unwrap();
        assert_eq!(out.graph.node_count(), 1);
        assert_eq!(out.graph.edge_count(), 0);
        assert_eq!(out.clique, vec![0]);
    }

    #[test]
    fn zero_nodes_rejected() {
        assert_eq!(generate(&params(0, 3)).unwrap_err(), YeasError::NoNodes);
        let mut p = params(10, 1);
        p.alpha = 0.5;
        assert!(matches!(generate(&p), Err(YeasError::InvalidParam { name: "alpha", .. })));
        p.alpha = 0.7;
        p.beta = 1.0;
        assert!(matches!(generate(&p), Err(YeasError::InvalidParam { name: "beta", .. })));
    }

    #[test]
    fn literal_rule_freezes_clique() {
        let mut p = params(500, 9);
        p.q = 5.0;
        let out = generate_with(&p, YeasOptions { rule: CliqueRule::Literal, ..Default::default() })
            .unwrap();
        assert_eq!(out.clique.len(), 1);
    }

    #[test]
    fn sectors_match_brute_force() {
        for seed in 0..4 {
            let p = params(1500, seed);
            let layout = Layout::sample(&p).unwrap();
            let a = build(&layout, &p, YeasOptions::default());
            let b = build(&layout, &p, YeasOptions { scan: PeeringScan::BruteForce, ..Default::default() });
            assert_eq!(a.graph, b.graph, "seed {seed}");
        }
    }

    #[test]
    fn nearest_matches_exhaustive() {
        let p = params(400, 5);
        let layout = Layout::sample(&p).unwrap();
        for pos in 1..layout.order.len() {
            let w = &layout.coords[layout.order[pos] as usize];
            let (best_id, best_d) = layout.order[..pos]
                .iter()
                .map(|&v| (v, hdist(w, &layout.coords[v as usize])))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .unwrap();
            assert_eq!(layout.nearest[pos], (best_id, best_d));
        }
    }

    #[test]
    fn calibration_hits_target() {
        let p = params(3000, 2);
        let layout = Layout::sample(&p).unwrap();
        let q = calibrate_q(&layout, 8, CliqueRule::SumBelowScaledMin).unwrap();
        assert_eq!(layout.clique_size(q, CliqueRule::SumBelowScaledMin), 8);
    }
}
