//! Empirical statistics of labeled AS graphs: the basic size, clustering and
//! distance figures, degree and cone-size CCDFs, peering likelihood by cone
//! size, and the peer-cone overlap distribution.

use std::collections::HashMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{LabeledAsGraph, NodeId, UndirectedView};
use crate::spider::top_clique;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("no node has two or more peer neighbors")]
    NoEligibleCenter,
    #[error("sampling gave up after {0} draws without an eligible center")]
    RetryBudgetExhausted(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub nodes: usize,
    pub edges: usize,
    pub peer_edges: usize,
    pub cp_edges: usize,
    pub avg_degree: f64,
    /// Mean local clustering over nodes of degree ≥ 2.
    pub avg_local_clustering: f64,
    /// Mean local clustering over all nodes, degree < 2 counted as 0.
    pub avg_local_clustering_zero_fill: f64,
    /// 3 × triangles / connected triples.
    pub global_transitivity: f64,
    /// Mean shortest-path length over connected ordered pairs, edges unlabeled.
    pub avg_distance: f64,
    pub diameter: u32,
    pub largest_component_size: usize,
    pub tier1_count: usize,
    pub method_notes: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    /// Exact up to `exact_threshold` nodes, sampled above.
    Auto,
    Exact,
    Sampled,
}

#[derive(Clone, Copy, Debug)]
pub struct MetricsOptions {
    pub distances: DistanceMode,
    pub exact_threshold: usize,
    pub sample_sources: usize,
    /// Seed for sampled distances; unused in exact mode.
    pub seed: u64,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        MetricsOptions {
            distances: DistanceMode::Auto,
            exact_threshold: 50_000,
            sample_sources: 1_000,
            seed: 0,
        }
    }
}

impl MetricsOptions {
    pub fn uses_sampling(&self, n: usize) -> bool {
        match self.distances {
            DistanceMode::Exact => false,
            DistanceMode::Sampled => true,
            DistanceMode::Auto => n > self.exact_threshold,
        }
    }
}

pub fn basic_metrics(g: &LabeledAsGraph, opts: &MetricsOptions) -> MetricsReport {
    let n = g.node_count();
    let view = g.undirected();
    let cl = clustering(&view);
    let sampled = opts.uses_sampling(n);
    let sources: Vec<NodeId> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let k = opts.sample_sources.min(n);
        let mut s: Vec<NodeId> = sample(&mut rng, n, k).into_iter().map(|i| i as NodeId).collect();
        s.sort_unstable();
        s
    } else {
        g.nodes().collect()
    };
    let dist = distance_stats(&view, &sources);
    let mut diameter = dist.max_distance;
    let mut notes = if sampled {
        format!(
            "distances from {} seeded sources (seed {}); diameter is a lower bound",
            sources.len(),
            opts.seed
        )
    } else {
        "exact all-source BFS".to_string()
    };
    if sampled {
        let sweep = double_sweep(&view, sources.first().copied().unwrap_or(0));
        if sweep > diameter {
            diameter = sweep;
        }
        notes.push_str(" (max of sampled eccentricities and a double sweep)");
    }
    notes.push_str("; avg_local_clustering averages nodes of degree >= 2");
    MetricsReport {
        nodes: n,
        edges: g.edge_count(),
        peer_edges: g.peer_edges().len(),
        cp_edges: g.cp_edges().len(),
        avg_degree: if n == 0 { 0.0 } else { 2.0 * g.edge_count() as f64 / n as f64 },
        avg_local_clustering: cl.avg_local,
        avg_local_clustering_zero_fill: cl.avg_local_zero_fill,
        global_transitivity: cl.transitivity,
        avg_distance: if dist.pairs == 0 { 0.0 } else { dist.total as f64 / dist.pairs as f64 },
        diameter,
        largest_component_size: largest_component(&view),
        tier1_count: top_clique(g).len(),
        method_notes: notes,
    }
}

/// Per-node local clustering coefficients.
pub fn local_clustering(view: &UndirectedView) -> Vec<f64> {
    let n = view.node_count();
    let mut mark = vec![false; n];
    (0..n as NodeId)
        .map(|u| {
            let nb = view.neighbors(u);
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let links = triangle_links(view, u, &mut mark);
            links as f64 / (k * (k - 1) / 2) as f64
        })
        .collect()
}

/// Number of edges among the neighbors of `u`.
fn triangle_links(view: &UndirectedView, u: NodeId, mark: &mut [bool]) -> u64 {
    let nb = view.neighbors(u);
    for &v in nb {
        mark[v as usize] = true;
    }
    let mut links = 0u64;
    for &v in nb {
        for &w in view.neighbors(v) {
            if w > v && mark[w as usize] {
                links += 1;
            }
        }
    }
    for &v in nb {
        mark[v as usize] = false;
    }
    links
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Clustering {
    /// Over nodes of degree ≥ 2.
    pub avg_local: f64,
    /// Over all nodes, degree < 2 counted as 0.
    pub avg_local_zero_fill: f64,
    pub transitivity: f64,
}

pub fn clustering(view: &UndirectedView) -> Clustering {
    let n = view.node_count();
    if n == 0 {
        return Clustering::default();
    }
    let mut eligible = 0usize;
    let mut mark = vec![false; n];
    let mut local_sum = 0.0;
    let mut closed = 0u64;
    let mut triples = 0u64;
    for u in 0..n as NodeId {
        let k = view.degree(u) as u64;
        if k < 2 {
            continue;
        }
        let links = triangle_links(view, u, &mut mark);
        let possible = k * (k - 1) / 2;
        eligible += 1;
        local_sum += links as f64 / possible as f64;
        closed += links;
        triples += possible;
    }
    let transitivity = if triples == 0 { 0.0 } else { closed as f64 / triples as f64 };
    Clustering {
        avg_local: if eligible == 0 { 0.0 } else { local_sum / eligible as f64 },
        avg_local_zero_fill: local_sum / n as f64,
        transitivity,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DistanceStats {
    /// Sum of distances over connected ordered (source, target) pairs.
    pub total: u64,
    pub pairs: u64,
    pub max_distance: u32,
}

/// BFS from every source in `sources`, 64 at a time with bit-parallel
/// frontiers.
pub fn distance_stats(view: &UndirectedView, sources: &[NodeId]) -> DistanceStats {
    let (offsets, targets) = view.raw();
    let n = view.node_count();
    sources
        .par_chunks(64)
        .map(|batch| {
            let mut visited = vec![0u64; n];
            let mut frontier = vec![0u64; n];
            let mut next = vec![0u64; n];
            for (i, &s) in batch.iter().enumerate() {
                visited[s as usize] |= 1 << i;
                frontier[s as usize] |= 1 << i;
            }
            let mut stats = DistanceStats::default();
            let mut level = 0u32;
            loop {
                level += 1;
                let mut any = 0u64;
                let mut found = 0u64;
                for v in 0..n {
                    let mut acc = 0u64;
                    for &w in &targets[offsets[v]..offsets[v + 1]] {
                        acc |= frontier[w as usize];
                    }
                    let fresh = acc & !visited[v];
                    next[v] = fresh;
                    if fresh != 0 {
                        visited[v] |= fresh;
                        any |= fresh;
                        found += fresh.count_ones() as u64;
                    }
                }
                if any == 0 {
                    break;
                }
                stats.total += found * level as u64;
                stats.pairs += found;
                stats.max_distance = level;
                std::mem::swap(&mut frontier, &mut next);
            }
            stats
        })
        .reduce(DistanceStats::default, |a, b| DistanceStats {
            total: a.total + b.total,
            pairs: a.pairs + b.pairs,
            max_distance: a.max_distance.max(b.max_distance),
        })
}

fn bfs_levels(view: &UndirectedView, s: NodeId) -> Vec<u32> {
    let n = view.node_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = vec![s];
    dist[s as usize] = 0;
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &y in view.neighbors(x) {
            if dist[y as usize] == u32::MAX {
                dist[y as usize] = dist[x as usize] + 1;
                queue.push(y);
            }
        }
    }
    dist
}

/// Diameter lower bound: BFS from `start`, then from the farthest node found.
pub fn double_sweep(view: &UndirectedView, start: NodeId) -> u32 {
    if view.node_count() == 0 {
        return 0;
    }
    let far = |d: &[u32]| {
        d.iter()
            .enumerate()
            .filter(|(_, &x)| x != u32::MAX)
            .max_by_key(|(i, &x)| (x, std::cmp::Reverse(*i)))
            .map(|(i, &x)| (i as NodeId, x))
            .unwrap()
    };
    let (a, _) = far(&bfs_levels(view, start));
    far(&bfs_levels(view, a)).1
}

pub fn largest_component(view: &UndirectedView) -> usize {
    let n = view.node_count();
    let mut seen = vec![false; n];
    let mut best = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s as NodeId);
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &y in view.neighbors(x) {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        best = best.max(size);
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub bin_low: f64,
    pub bin_high: f64,
    /// `None` for empty bins.
    pub value: Option<f64>,
    pub count: u64,
}

/// Ordered curve points; CSV columns `bin_low,bin_high,value,count`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BinnedCurve {
    pub points: Vec<CurvePoint>,
}

impl BinnedCurve {
    /// `(x, value)` for points with a value, `x` the bin's upper edge.
    pub fn xy(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().filter_map(|p| p.value.map(|v| (p.bin_high, v)))
    }
}

/// Exact CCDF `P(X > x)` evaluated at every distinct value `x`; `count` is the
/// multiplicity of `x`.
pub fn ccdf<T: Copy + Ord + Into<f64>>(values: &[T]) -> BinnedCurve {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let total = sorted.len() as f64;
    let mut points = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let xf: f64 = x.into();
        points.push(CurvePoint {
            bin_low: xf,
            bin_high: xf,
            value: Some((sorted.len() - j) as f64 / total),
            count: (j - i) as u64,
        });
        i = j;
    }
    BinnedCurve { points }
}

pub fn degree_ccdf(g: &LabeledAsGraph) -> BinnedCurve {
    let deg: Vec<u32> = g.nodes().map(|u| g.degree(u) as u32).collect();
    ccdf(&deg)
}

pub fn cone_ccdf(g: &LabeledAsGraph) -> BinnedCurve {
    let sizes: Vec<u32> = g.cone_sizes().into_iter().map(|s| s as u32).collect();
    ccdf(&sizes)
}

/// Least-squares slope of `log10 value` against `log10 x` over curve points
/// with `lo ≤ x ≤ hi` and a positive value.
pub fn loglog_slope(curve: &BinnedCurve, lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = curve
        .xy()
        .filter(|&(x, v)| x >= lo && x <= hi && x > 0.0 && v > 0.0)
        .map(|(x, v)| (x.log10(), v.log10()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `[lo, hi]` spanning `decades` decades centered (in log scale) on the
/// range of `x` values with positive CCDF. The whole range if it is narrower.
pub fn middle_decades(curve: &BinnedCurve, decades: f64) -> Option<(f64, f64)> {
    let xs: Vec<f64> = curve.xy().filter(|&(x, v)| x > 0.0 && v > 0.0).map(|p| p.0).collect();
    let (first, last) = (*xs.first()?, *xs.last()?);
    let (a, b) = (first.log10(), last.log10());
    if b - a <= decades {
        return Some((first, last));
    }
    let c = 0.5 * (a + b);
    Some((10f64.powf(c - decades / 2.0), 10f64.powf(c + decades / 2.0)))
}

/// Base-2 bin index of a positive integer: `[2^b, 2^(b+1))`.
fn log2_bin(x: usize) -> usize {
    debug_assert!(x > 0);
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

/// Fraction of node pairs that peer, binned (base 2) by the smaller of the
/// two cone sizes. Denominators are exact pair counts.
pub fn peering_likelihood(g: &LabeledAsGraph, cones: &[usize]) -> BinnedCurve {
    let n = g.node_count();
    let mut sorted: Vec<usize> = cones.to_vec();
    sorted.sort_unstable();
    let bins = sorted.last().map_or(0, |&m| log2_bin(m.max(1)) + 1);
    let mut pairs = vec![0u64; bins];
    for (i, &c) in sorted.iter().enumerate() {
        pairs[log2_bin(c)] += (n - 1 - i) as u64;
    }
    let mut peers = vec![0u64; bins];
    for &(a, b) in g.peer_edges() {
        let m = cones[a as usize].min(cones[b as usize]);
        peers[log2_bin(m)] += 1;
    }
    let points = (0..bins)
        .map(|b| CurvePoint {
            bin_low: (1u64 << b) as f64,
            bin_high: (1u64 << (b + 1)) as f64,
            value: (pairs[b] > 0).then(|| peers[b] as f64 / pairs[b] as f64),
            count: pairs[b],
        })
        .collect();
    BinnedCurve { points }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverlapResult {
    /// `P(X > x)` at `x ∈ {0} ∪ {2^-20, …, 1/2, 1}`; `count` is the number of
    /// samples in `(previous x, x]` (`x = 0` exactly for the first point).
    pub curve: BinnedCurve,
    pub zero_fraction: f64,
    pub samples: u64,
}

const OVERLAP_LOG_BINS: i32 = 20;

/// Cone overlap between pairs of peers of a common node.
///
/// Each sample draws a center `C` with probability proportional to its
/// degree (redrawing while `C` has fewer than two peers), then two distinct
/// peers `A`, `B` of `C` uniformly, and records
/// `|t(A) ∩ t(B)| / min(|t(A)|, |t(B)|)`. Sample `i` uses its own stream of
/// the seeded generator.
pub fn overlap_ccdf(g: &LabeledAsGraph, samples: u64, seed: u64) -> Result<OverlapResult, MetricsError> {
    let degrees: Vec<usize> = g.nodes().map(|u| g.degree(u)).collect();
    if !g.nodes().any(|u| g.peers(u).len() >= 2) {
        return Err(MetricsError::NoEligibleCenter);
    }
    let picker = WeightedIndex::new(&degrees).map_err(|_| MetricsError::NoEligibleCenter)?;
    let eligible_weight: usize =
        g.nodes().filter(|&u| g.peers(u).len() >= 2).map(|u| degrees[u as usize]).sum();
    let total_weight: usize = degrees.iter().sum();
    // Expected draws per sample is total/eligible; allow a generous multiple.
    let retry_budget = 1_000 * (total_weight / eligible_weight.max(1) + 1) as u64;

    let forest = g.is_cp_forest();
    let sizes = g.cone_sizes();
    let pairs: Vec<(NodeId, NodeId)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            for _ in 0..retry_budget {
                let c = picker.sample(&mut rng) as NodeId;
                let peers = g.peers(c);
                if peers.len() < 2 {
                    continue;
                }
                let a = rng.gen_range(0..peers.len());
                let mut b = rng.gen_range(0..peers.len() - 1);
                if b >= a {
                    b += 1;
                }
                return Ok((peers[a], peers[b]));
            }
            Err(MetricsError::RetryBudgetExhausted(retry_budget))
        })
        .collect::<Result<_, _>>()?;

    let mut memo: HashMap<(NodeId, NodeId), f64> = HashMap::new();
    let mut cones: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    let mut xs = Vec::with_capacity(pairs.len());
    let ancestors = if forest { Some(AncestorTest::new(g)) } else { None };
    for (a, b) in pairs {
        let key = (a.min(b), a.max(b));
        let x = match memo.get(&key) {
            Some(&x) => x,
            None => {
                let (ta, tb) = (sizes[a as usize], sizes[b as usize]);
                let inter = match &ancestors {
                    Some(anc) => {
                        if anc.is_ancestor(a, b) {
                            tb
                        } else if anc.is_ancestor(b, a) {
                            ta
                        } else {
                            0
                        }
                    }
                    None => {
                        for v in [a, b] {
                            cones.entry(v).or_insert_with(|| g.customer_cone(v));
                        }
                        intersection_size(&cones[&a], &cones[&b])
                    }
                };
                let x = inter as f64 / ta.min(tb) as f64;
                memo.insert(key, x);
                x
            }
        };
        xs.push(x);
    }
    Ok(overlap_curve(&xs))
}

fn overlap_curve(xs: &[f64]) -> OverlapResult {
    let total = xs.len() as f64;
    let mut thresholds = vec![0.0];
    for j in (0..OVERLAP_LOG_BINS).rev() {
        thresholds.push(0.5f64.powi(j + 1));
    }
    thresholds.push(1.0);
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut points = Vec::with_capacity(thresholds.len());
    let mut prev_le = 0usize;
    for &t in &thresholds {
        let le = sorted.partition_point(|&x| x <= t);
        points.push(CurvePoint {
            bin_low: t,
            bin_high: t,
            value: (total > 0.0).then(|| (sorted.len() - le) as f64 / total),
            count: (le - prev_le) as u64,
        });
        prev_le = le;
    }
    let zeros = sorted.partition_point(|&x| x <= 0.0);
    OverlapResult {
        curve: BinnedCurve { points },
        zero_fraction: if total > 0.0 { zeros as f64 / total } else { 0.0 },
        samples: xs.len() as u64,
    }
}

fn intersection_size(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

/// Euler-tour intervals on a customer-provider forest.
struct AncestorTest {
    enter: Vec<u32>,
    exit: Vec<u32>,
}

impl AncestorTest {
    fn new(g: &LabeledAsGraph) -> Self {
        let n = g.node_count();
        let mut enter = vec![0u32; n];
        let mut exit = vec![0u32; n];
        let mut clock = 0u32;
        let mut stack: Vec<(NodeId, usize)> = Vec::new();
        for root in g.nodes().filter(|&u| g.providers(u).is_empty()) {
            enter[root as usize] = clock;
            clock += 1;
            stack.push((root, 0));
            while let Some(top) = stack.last_mut() {
                let (x, next) = *top;
                let cs = g.customers(x);
                if next < cs.len() {
                    top.1 += 1;
                    let c = cs[next];
                    enter[c as usize] = clock;
                    clock += 1;
                    stack.push((c, 0));
                } else {
                    exit[x as usize] = clock;
                    clock += 1;
                    stack.pop();
                }
            }
        }
        AncestorTest { enter, exit }
    }

    /// `b ∈ t(a)`.
    fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        self.enter[a as usize] <= self.enter[b as usize] && self.exit[b as usize] <= self.exit[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u32) -> LabeledAsGraph {
        let cps: Vec<_> = (1..n).map(|i| (i, i - 1)).collect();
        LabeledAsGraph::from_edges(&[], &cps).unwrap()
    }

    #[test]
    fn path_and_triangle() {
        let r = basic_metrics(&path(5), &MetricsOptions::default());
        assert_eq!(r.diameter, 4);
        assert_eq!(r.avg_local_clustering, 0.0);
        assert_eq!(r.avg_local_clustering_zero_fill, 0.0);
        assert!((r.avg_distance - 2.0).abs() < 1e-12);
        assert_eq!(r.largest_component_size, 5);

        let g = LabeledAsGraph::from_edges(&[(0, 1), (1, 2), (0, 2)], &[]).unwrap();
        let r = basic_metrics(&g, &MetricsOptions::default());
        assert_eq!(r.avg_local_clustering, 1.0);
        assert_eq!(r.global_transitivity, 1.0);
        assert_eq!(r.diameter, 1);
        assert_eq!(r.tier1_count, 3);
    }

    #[test]
    fn clustering_conventions() {
        // triangle 0-1-2 with pendant 3 on node 0
        let g = LabeledAsGraph::from_edges(&[(0, 1), (1, 2), (0, 2), (0, 3)], &[]).unwrap();
        let c = clustering(&g.undirected());
        assert!((c.avg_local - (1.0 / 3.0 + 2.0) / 3.0).abs() < 1e-12);
        assert!((c.avg_local_zero_fill - (1.0 / 3.0 + 2.0) / 4.0).abs() < 1e-12);
        assert!((c.transitivity - 3.0 / 5.0).abs() < 1e-12);
        let local = local_clustering(&g.undirected());
        assert_eq!(local[3], 0.0);
        assert_eq!(local[1], 1.0);
    }

    #[test]
    fn bit_parallel_bfs_matches_plain_bfs() {
        // two components, more than 64 sources
        let mut peers = Vec::new();
        for i in 0..90u32 {
            peers.push((i, (i * 7 + 3) % 90));
            peers.push((i, i + 1));
        }
        peers.retain(|&(a, b)| a != b && b < 100);
        let mut seen = std::collections::HashSet::new();
        peers.retain(|&(a, b)| seen.insert((a.min(b), a.max(b))));
        peers.push((120, 121));
        let g = LabeledAsGraph::new(130, &peers, &[]).unwrap();
        let view = g.undirected();
        let all: Vec<NodeId> = g.nodes().collect();
        let fast = distance_stats(&view, &all);
        let mut slow = DistanceStats::default();
        for &s in &all {
            for d in bfs_levels(&view, s) {
                if d != u32::MAX && d > 0 {
                    slow.total += d as u64;
                    slow.pairs += 1;
                    slow.max_distance = slow.max_distance.max(d);
                }
            }
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn degree_ccdf_shapes() {
        let star: Vec<_> = (1..10).map(|i| (0, i)).collect();
        let g = LabeledAsGraph::from_edges(&star, &[]).unwrap();
        let c = degree_ccdf(&g);
        let at1 = c.points.iter().find(|p| p.bin_low == 1.0).unwrap();
        assert!((at1.value.unwrap() - 0.1).abs() < 1e-12);

        // 4-cycle: 2-regular
        let g = LabeledAsGraph::from_edges(&[(0, 1), (1, 2), (2, 3), (0, 3)], &[]).unwrap();
        let c = degree_ccdf(&g);
        assert_eq!(c.points.len(), 1);
        assert_eq!(c.points[0].value, Some(0.0));
    }

    #[test]
    fn cone_ccdf_on_binary_tree() {
        // perfect binary tree of depth 3: 15 nodes, node i has children 2i+1, 2i+2
        let cps: Vec<_> = (1..15u32).map(|c| (c, (c - 1) / 2)).collect();
        let g = LabeledAsGraph::from_edges(&[], &cps).unwrap();
        let c = cone_ccdf(&g);
        let got: Vec<(f64, u64)> = c.points.iter().map(|p| (p.bin_low, p.count)).collect();
        assert_eq!(got, vec![(1.0, 8), (3.0, 4), (7.0, 2), (15.0, 1)]);
        assert!((c.points[0].value.unwrap() - 7.0 / 15.0).abs() < 1e-12);

        let c = cone_ccdf(&LabeledAsGraph::empty(4));
        assert_eq!(c.points.len(), 1);
        assert_eq!(c.points[0].value, Some(0.0));
    }

    #[test]
    fn peering_likelihood_hand_count() {
        // A=0, B=1 share customers 2 and 3: cones {3,3,1,1}; A-B peer.
        let g = LabeledAsGraph::from_edges(&[(0, 1)], &[(2, 0), (3, 0), (2, 1), (3, 1)]).unwrap();
        let cones = g.cone_sizes();
        assert_eq!(cones, vec![3, 3, 1, 1]);
        let c = peering_likelihood(&g, &cones);
        assert_eq!(c.points[0].count, 5);
        assert_eq!(c.points[0].value, Some(0.0));
        assert_eq!(c.points[1].count, 1);
        assert_eq!(c.points[1].value, Some(1.0));
        let total: u64 = c.points.iter().map(|p| p.count).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn overlap_single_intersection() {
        // C=0 peers with A=1 and B=2; m=3 is a customer of both.
        let g = LabeledAsGraph::from_edges(&[(0, 1), (0, 2)], &[(3, 1), (3, 2)]).unwrap();
        let r = overlap_ccdf(&g, 200, 7).unwrap();
        assert_eq!(r.samples, 200);
        assert_eq!(r.zero_fraction, 0.0);
        // every sample is exactly 1/2
        let half = r.curve.points.iter().find(|p| p.bin_high == 0.5).unwrap();
        assert_eq!(half.count, 200);
        assert_eq!(half.value, Some(0.0));
    }

    #[test]
    fn overlap_on_spider_is_zero() {
        let g = LabeledAsGraph::from_edges(&[(0, 1), (0, 2), (1, 2)], &[(3, 0), (4, 1), (5, 2)]).unwrap();
        let r = overlap_ccdf(&g, 500, 1).unwrap();
        assert_eq!(r.zero_fraction, 1.0);
        assert_eq!(r.curve.points[0].value, Some(0.0));
    }

    #[test]
    fn overlap_needs_two_peers() {
        let g = LabeledAsGraph::from_edges(&[(0, 1)], &[]).unwrap();
        assert_eq!(overlap_ccdf(&g, 10, 1).unwrap_err(), MetricsError::NoEligibleCenter);
    }

    #[test]
    fn slopes() {
        // P(X > x) = 1/x on a grid
        let points = (1..=1000)
            .map(|x| CurvePoint { bin_low: x as f64, bin_high: x as f64, value: Some(1.0 / x as f64), count: 1 })
            .collect();
        let c = BinnedCurve { points };
        let s = loglog_slope(&c, 1.0, 1000.0).unwrap();
        assert!((s + 1.0).abs() < 1e-12);
        let (lo, hi) = middle_decades(&c, 2.0).unwrap();
        assert!((lo - 10f64.powf(0.5)).abs() < 1e-9 && (hi - 10f64.powf(2.5)).abs() < 1e-9);
    }
}
