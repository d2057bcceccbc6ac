//! Network-formation game over labeled AS graphs.
//!
//! Every player `u` announces, for each other player `v`, whether it wants
//! `v` as a provider (`Provider`), as a peer (`Peer`) or nothing. A
//! customer-provider edge needs only the customer's request and the
//! provider's silence; a peer edge needs both sides to ask for some link.
//! A player pays the normalized sum of its valley-free distances plus
//! maintenance for each provider and each peer.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{LabeledAsGraph, NodeId};
use crate::spider::verify_spider;
use crate::valley::{valley_free_distances_from, VfDistance};

/// Cost comparisons treat differences up to this size as ties.
pub const COST_TOLERANCE: f64 = 1e-12;

/// Largest player count accepted by [`enumerate_equilibria`].
pub const MAX_ENUMERATION_PLAYERS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("maintenance costs must be finite and nonnegative (phi_p = {phi_p}, phi_r = {phi_r})")]
    InvalidParams { phi_p: f64, phi_r: f64 },
    #[error("exhaustive enumeration supports 2..={max} players, got {0}", max = MAX_ENUMERATION_PLAYERS)]
    TooManyPlayers(usize),
    #[error("{0} and {1} are not joined by a peer edge")]
    NotPeerEdge(NodeId, NodeId),
    #[error("clique size must be at least 1")]
    EmptyClique,
    #[error("clique size bound is unbounded when phi_r = 0")]
    UnboundedClique,
    #[error("spanning subgraph search limited to {max} edges, graph has {0}", max = MAX_SUBGRAPH_EDGES)]
    TooManyEdges(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GameParams {
    pub phi_p: f64,
    pub phi_r: f64,
}

impl GameParams {
    pub fn new(phi_p: f64, phi_r: f64) -> Result<Self, GameError> {
        if !(phi_p.is_finite() && phi_r.is_finite() && phi_p >= 0.0 && phi_r >= 0.0) {
            return Err(GameError::InvalidParams { phi_p, phi_r });
        }
        Ok(GameParams { phi_p, phi_r })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Action {
    Abstain,
    Provider,
    Peer,
}

impl Action {
    const ALL: [Action; 3] = [Action::Abstain, Action::Provider, Action::Peer];

    fn wants_link(self) -> bool {
        self != Action::Abstain
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Abstain => "0",
            Action::Provider => "p",
            Action::Peer => "r",
        })
    }
}

/// One action per ordered pair `(u, v)`, `u ≠ v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrategyProfile {
    n: usize,
    actions: Vec<Action>,
}

impl StrategyProfile {
    pub fn new(n: usize) -> Self {
        StrategyProfile { n, actions: vec![Action::Abstain; n * n] }
    }

    /// Profile number `index` in base-3 order over ordered pairs
    /// `(0,1), (0,2), …, (n-1,n-2)`; digit 0/1/2 = abstain/provider/peer.
    pub fn from_index(n: usize, mut index: u64) -> Self {
        let mut s = Self::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    s.actions[u * n + v] = Action::ALL[(index % 3) as usize];
                    index /= 3;
                }
            }
        }
        s
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> Action {
        self.actions[u as usize * self.n + v as usize]
    }

    pub fn set(&mut self, u: NodeId, v: NodeId, a: Action) {
        assert_ne!(u, v, "no action toward oneself");
        self.actions[u as usize * self.n + v as usize] = a;
    }

    /// Player `u`'s actions toward every other player in id order.
    pub fn row(&self, u: NodeId) -> Vec<Action> {
        (0..self.n as NodeId).filter(|&v| v != u).map(|v| self.get(u, v)).collect()
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for u in 0..self.n as NodeId {
            if u > 0 {
                f.write_str(" ")?;
            }
            for a in self.row(u) {
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

/// Edge state of unordered pair `(i, j)`, `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
enum PairState {
    None = 0,
    Peer = 1,
    /// `i` is a customer of `j`.
    IUnderJ = 2,
    /// `j` is a customer of `i`.
    JUnderI = 3,
}

fn pair_state(a_ij: Action, a_ji: Action) -> PairState {
    match (a_ij, a_ji) {
        (x, y) if x.wants_link() && y.wants_link() => PairState::Peer,
        (Action::Provider, Action::Abstain) => PairState::IUnderJ,
        (Action::Abstain, Action::Provider) => PairState::JUnderI,
        _ => PairState::None,
    }
}

/// Base-4 encoding of a labeled graph on `n` nodes, one digit per
/// unordered pair in `(0,1), (0,2), …` order.
#[derive(Clone, Debug)]
struct PairIndex {
    n: usize,
    index: Vec<usize>,
    pairs: Vec<(NodeId, NodeId)>,
}

impl PairIndex {
    fn new(n: usize) -> Self {
        let mut index = vec![usize::MAX; n * n];
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                index[i * n + j] = pairs.len();
                index[j * n + i] = pairs.len();
                pairs.push((i as NodeId, j as NodeId));
            }
        }
        PairIndex { n, index, pairs }
    }

    fn weight(&self, u: NodeId, v: NodeId) -> u64 {
        4u64.pow(self.index[u as usize * self.n + v as usize] as u32)
    }

    fn encode(&self, s: &StrategyProfile) -> u64 {
        let mut code = 0u64;
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            code += (pair_state(s.get(i, j), s.get(j, i)) as u64) << (2 * k);
        }
        code
    }

    fn encode_graph(&self, g: &LabeledAsGraph) -> u64 {
        let mut code = 0u64;
        for &(a, b) in g.peer_edges() {
            code += PairState::Peer as u64 * self.weight(a, b);
        }
        for &(c, p) in g.cp_edges() {
            let st = if c < p { PairState::IUnderJ } else { PairState::JUnderI };
            code += st as u64 * self.weight(c, p);
        }
        code
    }

    fn decode(&self, code: u64) -> LabeledAsGraph {
        let mut peers = Vec::new();
        let mut cps = Vec::new();
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            match (code >> (2 * k)) & 3 {
                1 => peers.push((i, j)),
                2 => cps.push((i, j)),
                3 => cps.push((j, i)),
                _ => {}
            }
        }
        LabeledAsGraph::from_sorted_parts(self.n, peers, cps)
    }
}

/// Additive parts of one player's cost; kept separate so comparisons are
/// exact up to [`COST_TOLERANCE`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CostTerms {
    /// Sum of distances, `None` when some target is unreachable.
    pub distance_sum: Option<u32>,
    pub providers: u32,
    pub peers: u32,
}

impl CostTerms {
    pub fn value(&self, n: usize, params: GameParams) -> f64 {
        match self.distance_sum {
            None => f64::INFINITY,
            Some(d) => {
                d as f64 / n as f64
                    + params.phi_p * self.providers as f64
                    + params.phi_r * self.peers as f64
            }
        }
    }

    /// `self ≤ other` with ties within tolerance.
    pub fn le(&self, other: &CostTerms, n: usize, params: GameParams) -> bool {
        match (self.distance_sum, other.distance_sum) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => {
                let diff = (a as f64 - b as f64) / n as f64
                    + params.phi_p * (self.providers as f64 - other.providers as f64)
                    + params.phi_r * (self.peers as f64 - other.peers as f64);
                diff <= COST_TOLERANCE
            }
        }
    }

    /// `self < other` beyond tolerance.
    pub fn lt(&self, other: &CostTerms, n: usize, params: GameParams) -> bool {
        !other.le(self, n, params)
    }
}

pub fn cost_terms(g: &LabeledAsGraph, u: NodeId) -> CostTerms {
    let mut sum = 0u32;
    let mut finite = true;
    for (v, d) in valley_free_distances_from(g, u).into_iter().enumerate() {
        if v == u as usize {
            continue;
        }
        match d {
            VfDistance::Zero => {}
            VfDistance::One => sum += 1,
            VfDistance::Unreachable => finite = false,
        }
    }
    CostTerms {
        distance_sum: finite.then_some(sum),
        providers: g.providers(u).len() as u32,
        peers: g.peers(u).len() as u32,
    }
}

/// Communication plus maintenance cost of player `u`; infinite when some
/// player is unreachable.
pub fn cost(g: &LabeledAsGraph, u: NodeId, params: GameParams) -> f64 {
    cost_terms(g, u).value(g.node_count(), params)
}

/// Graph induced by the announced strategies.
pub fn induce_graph(s: &StrategyProfile) -> LabeledAsGraph {
    let pi = PairIndex::new(s.n);
    pi.decode(pi.encode(s))
}

/// Which pairwise-stability clause a profile violates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// (a) `player` strictly gains by replacing its whole row.
    Nash { player: NodeId, deviation: Vec<Action> },
    /// (b) An endpoint strictly gains by deleting the edge.
    Deletion { u: NodeId, v: NodeId },
    /// (c) Both endpoints strictly gain by adding the edge.
    Addition { u: NodeId, v: NodeId, peer: bool },
    /// (d) The customer→provider subgraph has a cycle.
    ProviderLoop,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Nash { player, .. } => write!(f, "(a) player {player} has a profitable deviation"),
            Violation::Deletion { u, v } => write!(f, "(b) deleting edge {u}-{v} is profitable"),
            Violation::Addition { u, v, peer } => write!(
                f,
                "(c) adding {} edge {u}-{v} benefits both endpoints",
                if *peer { "peer" } else { "customer-provider" }
            ),
            Violation::ProviderLoop => f.write_str("(d) provider loop"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StabilityOptions {
    /// Also test customer-provider additions in clause (c), in both
    /// orientations. Off by default: only consent (peer) edges are added.
    pub cp_additions: bool,
}

/// Memoized cost vectors per induced graph for a fixed player count.
pub struct Game {
    params: GameParams,
    opts: StabilityOptions,
    pairs: PairIndex,
    memo: HashMap<u64, Vec<CostTerms>>,
}

impl Game {
    pub fn new(n: usize, params: GameParams) -> Self {
        Self::with_options(n, params, StabilityOptions::default())
    }

    pub fn with_options(n: usize, params: GameParams, opts: StabilityOptions) -> Self {
        Game { params, opts, pairs: PairIndex::new(n), memo: HashMap::new() }
    }

    pub fn players(&self) -> usize {
        self.pairs.n
    }

    fn costs(&mut self, code: u64) -> &[CostTerms] {
        let pairs = &self.pairs;
        self.memo.entry(code).or_insert_with(|| {
            let g = pairs.decode(code);
            g.nodes().map(|u| cost_terms(&g, u)).collect()
        })
    }

    fn cost_of(&mut self, code: u64, u: NodeId) -> CostTerms {
        self.costs(code)[u as usize]
    }

    /// Cost vector for the graph induced by `s`.
    pub fn profile_costs(&mut self, s: &StrategyProfile) -> Vec<CostTerms> {
        let code = self.pairs.encode(s);
        self.costs(code).to_vec()
    }

    /// Clauses (b)–(d), which depend only on the induced graph.
    fn graph_violation(&mut self, code: u64) -> Option<Violation> {
        let n = self.players();
        let params = self.params;
        let base = self.costs(code).to_vec();
        for (k, &(i, j)) in self.pairs.pairs.clone().iter().enumerate() {
            let digit = (code >> (2 * k)) & 3;
            let w = 1u64 << (2 * k);
            if digit != 0 {
                let without = code - digit * w;
                let after = self.costs(without).to_vec();
                if after[i as usize].lt(&base[i as usize], n, params)
                    || after[j as usize].lt(&base[j as usize], n, params)
                {
                    return Some(Violation::Deletion { u: i, v: j });
                }
            } else {
                let mut additions = vec![(PairState::Peer as u64, true)];
                if self.opts.cp_additions {
                    additions.push((PairState::IUnderJ as u64, false));
                    additions.push((PairState::JUnderI as u64, false));
                }
                for (st, peer) in additions {
                    let after = self.costs(code + st * w).to_vec();
                    if after[i as usize].lt(&base[i as usize], n, params)
                        && after[j as usize].lt(&base[j as usize], n, params)
                    {
                        return Some(Violation::Addition { u: i, v: j, peer });
                    }
                }
            }
        }
        if self.pairs.decode(code).has_provider_cycle() {
            return Some(Violation::ProviderLoop);
        }
        None
    }

    /// Clause (a): some player strictly lowers its cost by replacing its
    /// whole action row.
    fn nash_violation(&mut self, s: &StrategyProfile, code: u64) -> Option<Violation> {
        let n = self.players();
        let params = self.params;
        for u in 0..n as NodeId {
            let current = self.cost_of(code, u);
            // code with every pair touching u cleared
            let mut rest = code;
            let others: Vec<NodeId> = (0..n as NodeId).filter(|&v| v != u).collect();
            for &v in &others {
                let w = self.pairs.weight(u, v);
                rest -= ((code / w) & 3) * w;
            }
            let alternatives = 3u64.pow(others.len() as u32);
            for alt in 0..alternatives {
                let mut digits = alt;
                let mut dev_code = rest;
                let mut row = Vec::with_capacity(others.len());
                for &v in &others {
                    let a = Action::ALL[(digits % 3) as usize];
                    digits /= 3;
                    row.push(a);
                    let st = if u < v { pair_state(a, s.get(v, u)) } else { pair_state(s.get(v, u), a) };
                    dev_code += st as u64 * self.pairs.weight(u, v);
                }
                if dev_code == code {
                    continue;
                }
                if self.cost_of(dev_code, u).lt(&current, n, params) {
                    return Some(Violation::Nash { player: u, deviation: row });
                }
            }
        }
        None
    }

    /// Checks clauses (a)–(d) in order and reports the first failure.
    pub fn check(&mut self, s: &StrategyProfile) -> Result<(), Violation> {
        assert_eq!(s.n, self.players(), "profile size does not match the game");
        let code = self.pairs.encode(s);
        if let Some(v) = self.nash_violation(s, code) {
            return Err(v);
        }
        match self.graph_violation(code) {
            Some(v) => Err(v),
            None => Ok(()),
        }
    }
}

/// Pairwise-stable Nash check with default options.
pub fn is_pairwise_stable(s: &StrategyProfile, params: GameParams) -> Result<(), Violation> {
    Game::new(s.players(), params).check(s)
}

/// Clear-cut peer edge test for the peer edge `{u, v}` with `n` players.
pub fn is_cpe(
    g: &LabeledAsGraph,
    (u, v): (NodeId, NodeId),
    params: GameParams,
    n: usize,
) -> Result<bool, GameError> {
    if !g.has_peer_edge(u, v) {
        return Err(GameError::NotPeerEdge(u, v));
    }
    let tu = g.customer_cone(u).len() as f64;
    let tv = g.customer_cone(v).len() as f64;
    if params.phi_r >= tu.min(tv) / n as f64 {
        return Ok(false);
    }
    // Some other peer w of `a` whose cone already holds `b`.
    let covered = |a: NodeId, b: NodeId| {
        g.peers(a)
            .iter()
            .any(|&w| w != b && g.customer_cone(w).binary_search(&b).is_ok())
    };
    Ok(!covered(u, v) && !covered(v, u))
}

#[derive(Clone, Debug)]
pub struct Equilibrium {
    pub profile: StrategyProfile,
    pub graph: LabeledAsGraph,
}

/// Every pairwise-stable profile on `n ∈ {2, 3, 4}` players, one
/// representative per distinct induced graph, in profile-index order.
pub fn enumerate_equilibria(n: usize, params: GameParams) -> Result<Vec<Equilibrium>, GameError> {
    enumerate_equilibria_with(n, params, StabilityOptions::default())
}

pub fn enumerate_equilibria_with(
    n: usize,
    params: GameParams,
    opts: StabilityOptions,
) -> Result<Vec<Equilibrium>, GameError> {
    if !(2..=MAX_ENUMERATION_PLAYERS).contains(&n) {
        return Err(GameError::TooManyPlayers(n));
    }
    let mut game = Game::with_options(n, params, opts);
    let total = 3u64.pow((n * (n - 1)) as u32);
    let mut graph_ok: HashMap<u64, bool> = HashMap::new();
    let mut found: HashMap<u64, usize> = HashMap::new();
    let mut out = Vec::new();
    for idx in 0..total {
        let s = StrategyProfile::from_index(n, idx);
        let code = game.pairs.encode(&s);
        if found.contains_key(&code) {
            continue;
        }
        let ok = match graph_ok.get(&code) {
            Some(&ok) => ok,
            None => {
                let ok = game.graph_violation(code).is_none();
                graph_ok.insert(code, ok);
                ok
            }
        };
        if !ok || game.nash_violation(&s, code).is_some() {
            continue;
        }
        found.insert(code, out.len());
        out.push(Equilibrium { graph: game.pairs.decode(code), profile: s });
    }
    Ok(out)
}

/// Upper bound on the largest cone among clique members:
/// `n · (φ_p − φ_r · (k − 1) + 1)`. Values above `n` are returned as-is.
pub fn cone_size_bound(n: usize, clique_size: usize, params: GameParams) -> Result<f64, GameError> {
    if clique_size == 0 {
        return Err(GameError::EmptyClique);
    }
    Ok(n as f64 * (params.phi_p - params.phi_r * (clique_size as f64 - 1.0) + 1.0))
}

/// Upper bound on the clique size that does not depend on `n`: the larger
/// root of `φ_r k² − (φ_p + φ_r + 1) k + 1 = 0`.
pub fn clique_size_bound(params: GameParams) -> Result<f64, GameError> {
    if params.phi_r <= 0.0 {
        return Err(GameError::UnboundedClique);
    }
    let b = params.phi_p + params.phi_r + 1.0;
    let disc = (b * b - 4.0 * params.phi_r).max(0.0);
    Ok((b + disc.sqrt()) / (2.0 * params.phi_r))
}

pub const MAX_SUBGRAPH_EDGES: usize = 20;

/// Whether some edge subset of `g` (all nodes kept) is a Spider graph.
/// Exhaustive over `2^edges` subsets.
pub fn contains_spanning_spider(g: &LabeledAsGraph) -> Result<bool, GameError> {
    let m = g.edge_count();
    if m > MAX_SUBGRAPH_EDGES {
        return Err(GameError::TooManyEdges(m));
    }
    let peers = g.peer_edges();
    let cps = g.cp_edges();
    for mask in 0u32..(1u32 << m) {
        let sub_peers: Vec<_> =
            peers.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let sub_cps: Vec<_> = cps
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i + peers.len()) & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let sub = LabeledAsGraph::from_sorted_parts(g.node_count(), sub_peers, sub_cps);
        if verify_spider(&sub).is_spider {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Stable code of a labeled graph on `n` nodes, for deduplication.
pub fn graph_code(g: &LabeledAsGraph) -> u64 {
    PairIndex::new(g.node_count()).encode_graph(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, r: f64) -> GameParams {
        GameParams::new(p, r).unwrap()
    }

    fn profile(n: usize, entries: &[(NodeId, NodeId, Action)]) -> StrategyProfile {
        let mut s = StrategyProfile::new(n);
        for &(u, v, a) in entries {
            s.set(u, v, a);
        }
        s
    }

    #[test]
    fn induced_edges() {
        use Action::*;
        let g = induce_graph(&profile(2, &[(0, 1, Provider)]));
        assert_eq!(g.cp_edges(), &[(0, 1)]);
        let g = induce_graph(&profile(2, &[(0, 1, Peer)]));
        assert_eq!(g.edge_count(), 0);
        let g = induce_graph(&profile(2, &[(0, 1, Provider), (1, 0, Peer)]));
        assert_eq!(g.peer_edges(), &[(0, 1)]);
        let g = induce_graph(&profile(2, &[(0, 1, Provider), (1, 0, Provider)]));
        assert_eq!(g.peer_edges(), &[(0, 1)]);
    }

    #[test]
    fn costs_from_definition() {
        let g = LabeledAsGraph::from_edges(&[(0, 1)], &[]).unwrap();
        assert!((cost(&g, 0, params(0.5, 0.1)) - 0.1).abs() < 1e-12);

        let g = LabeledAsGraph::from_edges(&[], &[(1, 0), (2, 0)]).unwrap();
        let c = cost(&g, 1, params(0.5, 0.1));
        assert!((c - (2.0 / 3.0 + 0.5)).abs() < 1e-12, "{c}");

        let g = LabeledAsGraph::empty(2);
        assert!(cost(&g, 0, params(0.5, 0.1)).is_infinite());
    }

    #[test]
    fn two_player_states() {
        use Action::*;
        let p = params(0.5, 0.1);
        assert_eq!(is_pairwise_stable(&profile(2, &[(0, 1, Peer), (1, 0, Peer)]), p), Ok(()));
        assert_eq!(is_pairwise_stable(&profile(2, &[(0, 1, Provider)]), p), Ok(()));
        assert!(matches!(
            is_pairwise_stable(&StrategyProfile::new(2), p),
            Err(Violation::Nash { .. })
        ));
    }

    #[test]
    fn provider_loop_detected() {
        use Action::*;
        let s = profile(3, &[(0, 1, Provider), (1, 2, Provider), (2, 0, Provider)]);
        let g = induce_graph(&s);
        assert!(g.has_provider_cycle());
        assert!(is_pairwise_stable(&s, params(0.5, 0.1)).is_err());
    }

    #[test]
    fn profile_index_round_trip() {
        let s = StrategyProfile::from_index(3, 0);
        assert!(s.row(0).iter().all(|&a| a == Action::Abstain));
        let s = StrategyProfile::from_index(2, 1);
        assert_eq!(s.get(0, 1), Action::Provider);
        let s = StrategyProfile::from_index(2, 3 * 2);
        assert_eq!(s.get(1, 0), Action::Peer);
        assert_eq!(s.to_string(), "0 r");
    }

    #[test]
    fn cpe_cases() {
        let cps = [(2, 1), (3, 1), (4, 2), (5, 3)];
        let g = LabeledAsGraph::new(6, &[(4, 5)], &cps).unwrap();
        assert!(is_cpe(&g, (4, 5), params(0.5, 0.1), 5).unwrap());
        assert!(!is_cpe(&g, (4, 5), params(0.5, 0.3), 5).unwrap());
        let g = LabeledAsGraph::new(6, &[(4, 5), (4, 3)], &cps).unwrap();
        assert!(!is_cpe(&g, (4, 5), params(0.5, 0.1), 5).unwrap());
        assert_eq!(is_cpe(&g, (2, 4), params(0.5, 0.1), 5), Err(GameError::NotPeerEdge(2, 4)));
    }

    #[test]
    fn bounds() {
        let b = cone_size_bound(100, 2, params(0.5, 0.1)).unwrap();
        assert!((b - 140.0).abs() < 1e-9);
        assert!((cone_size_bound(100, 7, params(0.5, 0.0)).unwrap() - 150.0).abs() < 1e-9);
        assert!((cone_size_bound(100, 1, params(0.5, 0.3)).unwrap() - 150.0).abs() < 1e-9);
        assert_eq!(cone_size_bound(100, 0, params(0.5, 0.3)), Err(GameError::EmptyClique));

        let k = clique_size_bound(params(1.0, 1.0)).unwrap();
        assert!((k - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        let k = clique_size_bound(params(41203.0 * 1.1 / 83374.0, 41203.0 * 0.05 / 57158.0)).unwrap();
        assert!((k - 43.184466821816486).abs() < 1e-9, "{k}");
        assert_eq!(clique_size_bound(params(1.0, 0.0)), Err(GameError::UnboundedClique));
    }

    #[test]
    fn clique_bound_monotone() {
        let grid = [0.01, 0.05, 0.1, 0.3, 0.7, 1.0, 2.0];
        for &pp in &grid {
            for w in grid.windows(2) {
                let a = clique_size_bound(params(pp, w[0])).unwrap();
                let b = clique_size_bound(params(pp, w[1])).unwrap();
                assert!(b <= a + 1e-12);
            }
        }
        for &pr in &grid {
            for w in grid.windows(2) {
                let a = clique_size_bound(params(w[0], pr)).unwrap();
                let b = clique_size_bound(params(w[1], pr)).unwrap();
                assert!(b >= a - 1e-12);
            }
        }
    }

    #[test]
    fn invalid_params_and_sizes() {
        assert!(GameParams::new(-0.1, 0.1).is_err());
        assert!(GameParams::new(0.1, f64::NAN).is_err());
        assert_eq!(enumerate_equilibria(5, params(0.5, 0.1)).unwrap_err(), GameError::TooManyPlayers(5));
    }

    #[test]
    fn two_player_equilibria() {
        let eqs = enumerate_equilibria(2, params(0.5, 0.1)).unwrap();
        assert!(!eqs.is_empty());
        for e in &eqs {
            assert!(verify_spider(&e.graph).is_spider, "{:?}", e.graph);
        }
    }

    #[test]
    fn spanning_spider_search() {
        // provider cycle of three: a spanning chain is a spider with a one-node clique
        let g = LabeledAsGraph::from_edges(&[], &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(contains_spanning_spider(&g).unwrap());
        // two isolated sinks never make a clique
        let g = LabeledAsGraph::from_edges(&[], &[(2, 0)]).unwrap();
        assert!(!contains_spanning_spider(&LabeledAsGraph::new(3, &[], &[(2, 0)]).unwrap()).unwrap());
        assert!(!contains_spanning_spider(&g).unwrap());
    }

    #[test]
    fn graph_code_matches_profile_code() {
        for idx in (0..3u64.pow(6)).step_by(17) {
            let s = StrategyProfile::from_index(3, idx);
            let g = induce_graph(&s);
            let pi = PairIndex::new(3);
            assert_eq!(graph_code(&g), pi.encode(&s));
            assert_eq!(pi.decode(graph_code(&g)), g);
        }
    }
}
