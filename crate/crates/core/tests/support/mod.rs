//! Brute-force oracles and random graph sources shared by the integration
//! tests.
#![allow(dead_code, clippy::needless_range_loop)]

use astopo::{LabeledAsGraph, NodeId, VfDistance};
use rand::Rng;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Step {
    Up,
    Peer,
    Down,
}

fn step(g: &LabeledAsGraph, a: NodeId, b: NodeId) -> Option<Step> {
    if g.providers(a).contains(&b) {
        Some(Step::Up)
    } else if g.peers(a).contains(&b) {
        Some(Step::Peer)
    } else if g.customers(a).contains(&b) {
        Some(Step::Down)
    } else {
        None
    }
}

/// Up* Peer? Down*
fn valley_free(steps: &[Step]) -> bool {
    steps.windows(2).all(|w| w[0] <= w[1] && !(w[0] == Step::Peer && w[1] == Step::Peer))
}

/// Every simple path from `u` to `v`, as step sequences.
fn simple_paths(g: &LabeledAsGraph, u: NodeId, v: NodeId) -> Vec<Vec<Step>> {
    fn dfs(
        g: &LabeledAsGraph,
        x: NodeId,
        target: NodeId,
        on_path: &mut Vec<bool>,
        steps: &mut Vec<Step>,
        out: &mut Vec<Vec<Step>>,
    ) {
        if x == target {
            out.push(steps.clone());
            return;
        }
        for y in g.nodes() {
            if on_path[y as usize] {
                continue;
            }
            if let Some(s) = step(g, x, y) {
                on_path[y as usize] = true;
                steps.push(s);
                dfs(g, y, target, on_path, steps, out);
                steps.pop();
                on_path[y as usize] = false;
            }
        }
    }
    let mut on_path = vec![false; g.node_count()];
    on_path[u as usize] = true;
    let mut out = Vec::new();
    dfs(g, u, v, &mut on_path, &mut Vec::new(), &mut out);
    out
}

/// Distance by classifying every simple path: 0 if a valley-free path leaves
/// through a peer or customer, 1 if only through providers, ∞ if none.
pub fn brute_force_distance(g: &LabeledAsGraph, u: NodeId, v: NodeId) -> VfDistance {
    if u == v {
        return VfDistance::Zero;
    }
    let valid: Vec<Vec<Step>> = simple_paths(g, u, v).into_iter().filter(|p| valley_free(p)).collect();
    if valid.iter().any(|p| p[0] != Step::Up) {
        VfDistance::Zero
    } else if !valid.is_empty() {
        VfDistance::One
    } else {
        VfDistance::Unreachable
    }
}

/// Descendants of `u` through provider→customer steps, by Warshall closure.
pub fn closure_cones(g: &LabeledAsGraph) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    let mut reach = vec![vec![false; n]; n];
    for u in 0..n {
        reach[u][u] = true;
        for &c in g.customers(u as NodeId) {
            reach[u][c as usize] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
        .into_iter()
        .map(|row| row.into_iter().enumerate().filter(|&(_, r)| r).map(|(j, _)| j as NodeId).collect())
        .collect()
}

/// Uniform labeling of every pair: none, peer, or customer-provider in either
/// direction, with `p_edge` the chance a pair is linked at all.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p_edge: f64) -> LabeledAsGraph {
    let mut peers = Vec::new();
    let mut cps = Vec::new();
    for a in 0..n as NodeId {
        for b in a + 1..n as NodeId {
            if !rng.gen_bool(p_edge) {
                continue;
            }
            match rng.gen_range(0..3) {
                0 => peers.push((a, b)),
                1 => cps.push((a, b)),
                _ => cps.push((b, a)),
            }
        }
    }
    LabeledAsGraph::new(n, &peers, &cps).unwrap()
}

/// `½(1 + e^{R−r})`, the solution of `T′ = ½ − T`, `T(R) = 1`, obtained by
/// differentiating the cone integral equation.
pub fn cone_profile_closed_form(r: f64, radius: f64) -> f64 {
    0.5 * (1.0 + (radius - r).exp())
}

/// Count mismatches between the library distance and the path oracle over
/// `graphs` random graphs with 2..=6 nodes. Returns (pairs checked, mismatches).
pub fn valley_free_agreement(graphs: usize, seed: u64) -> (usize, usize) {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = 0;
    let mut mismatches = 0;
    for _ in 0..graphs {
        let n = rng.gen_range(2..=6);
        let p = rng.gen_range(0.2..0.9);
        let g = random_graph(&mut rng, n, p);
        for u in g.nodes() {
            let fast = astopo::valley_free_distances_from(&g, u);
            for v in g.nodes().filter(|&v| v != u) {
                pairs += 1;
                if fast[v as usize] != brute_force_distance(&g, u, v) {
                    mismatches += 1;
                }
            }
        }
    }
    (pairs, mismatches)
}

/// Counts from checking the structural theorems on every equilibrium of one
/// game instance.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct TheoremTally {
    pub equilibria: usize,
    pub not_spider: usize,
    pub peer_edge_unjustified: usize,
    pub cone_bound_exceeded: usize,
    pub clique_bound_exceeded: usize,
}

pub fn check_equilibria(n: usize, params: astopo::GameParams) -> TheoremTally {
    use astopo::game::{clique_size_bound, cone_size_bound, enumerate_equilibria, is_cpe};
    let mut t = TheoremTally::default();
    for e in enumerate_equilibria(n, params).unwrap() {
        t.equilibria += 1;
        let report = astopo::verify_spider(&e.graph);
        if !report.is_spider {
            t.not_spider += 1;
        }
        let clique = &report.clique_nodes;
        for &(a, b) in e.graph.peer_edges() {
            let internal = clique.contains(&a) && clique.contains(&b);
            if !internal && !is_cpe(&e.graph, (a, b), params, n).unwrap() {
                t.peer_edge_unjustified += 1;
            }
        }
        if !clique.is_empty() {
            let cones = e.graph.cone_sizes();
            let max_cone = clique.iter().map(|&u| cones[u as usize]).max().unwrap() as f64;
            if max_cone > cone_size_bound(n, clique.len(), params).unwrap() + 1e-9 {
                t.cone_bound_exceeded += 1;
            }
        }
        if params.phi_r > 0.0 && clique.len() as f64 > clique_size_bound(params).unwrap() + 1e-9 {
            t.clique_bound_exceeded += 1;
        }
    }
    t
}

/// Every labeled graph on `n` nodes (4^(n(n−1)/2) of them).
pub fn all_graphs(n: usize) -> impl Iterator<Item = LabeledAsGraph> {
    let pairs: Vec<(NodeId, NodeId)> =
        (0..n as NodeId).flat_map(|a| (a + 1..n as NodeId).map(move |b| (a, b))).collect();
    let total = 4u64.pow(pairs.len() as u32);
    (0..total).map(move |mut code| {
        let mut peers = Vec::new();
        let mut cps = Vec::new();
        for &(a, b) in &pairs {
            match code % 4 {
                1 => peers.push((a, b)),
                2 => cps.push((a, b)),
                3 => cps.push((b, a)),
                _ => {}
            }
            code /= 4;
        }
        LabeledAsGraph::new(n, &peers, &cps).unwrap()
    })
}

/// Graphs on `n` nodes where every ordered pair is valley-free reachable
/// (finite total cost) but no spanning subgraph is a Spider graph.
/// Returns (finite-cost graphs checked, counterexamples).
pub fn spanning_spider_failures(n: usize) -> (usize, usize) {
    let mut finite = 0;
    let mut failures = 0;
    for g in all_graphs(n) {
        let all_reachable = g.nodes().all(|u| valley_free_distances_all_finite(&g, u));
        if !all_reachable {
            continue;
        }
        finite += 1;
        if !astopo::game::contains_spanning_spider(&g).unwrap() {
            failures += 1;
        }
    }
    (finite, failures)
}

fn valley_free_distances_all_finite(g: &LabeledAsGraph, u: NodeId) -> bool {
    astopo::valley_free_distances_from(g, u).iter().all(|d| d.is_finite())
}

pub const PHI_P_GRID: [f64; 3] = [0.3, 0.5, 1.0];
pub const PHI_R_GRID: [f64; 3] = [0.05, 0.1, 0.3];
