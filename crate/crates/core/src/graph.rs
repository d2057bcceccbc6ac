//! Labeled AS graph: nodes joined by settlement-free peer edges or by directed
//! customer→provider edges.
//!
//! Node identifiers are dense (`0..node_count`). Every node exposes three
//! adjacency views (peers, providers, customers) backed by compressed sparse
//! rows, so neighbor iteration is `O(degree)`.

use std::collections::HashMap;

use thiserror::Error;

pub type NodeId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("node {node} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("duplicate {kind} edge between {a} and {b}")]
    Duplicate { kind: &'static str, a: NodeId, b: NodeId },
    #[error("conflicting edge roles between {a} and {b}")]
    Conflict { a: NodeId, b: NodeId },
    #[error("graph has no nodes")]
    Empty,
}

/// How `v` relates to `u`, seen from `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Link {
    Peer,
    /// `v` is a provider of `u`.
    Provider,
    /// `v` is a customer of `u`.
    Customer,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Adjacency {
    fn build(n: usize, arcs: impl Iterator<Item = (NodeId, NodeId)> + Clone) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (s, _) in arcs.clone() {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        for (s, t) in arcs {
            targets[fill[s as usize]] = t;
            fill[s as usize] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Adjacency { offsets, targets }
    }

    #[inline]
    fn of(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }
}

/// Immutable labeled AS graph.
///
/// Peer edges are stored as `(a, b)` with `a < b`; customer-provider edges as
/// `(customer, provider)`. Both lists are kept sorted, so two graphs compare
/// equal exactly when their node counts and labeled edge sets match.
#[derive(Clone, Debug)]
pub struct LabeledAsGraph {
    node_count: usize,
    peer_edges: Vec<(NodeId, NodeId)>,
    cp_edges: Vec<(NodeId, NodeId)>,
    peers: Adjacency,
    providers: Adjacency,
    customers: Adjacency,
}

impl PartialEq for LabeledAsGraph {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count
            && self.peer_edges == other.peer_edges
            && self.cp_edges == other.cp_edges
    }
}

impl Eq for LabeledAsGraph {}

impl LabeledAsGraph {
    /// Builds a graph over `node_count` nodes.
    ///
    /// Fails on self-loops, out-of-range ids, repeated pairs and pairs that
    /// appear in more than one role (peer and customer-provider, or
    /// customer-provider in both directions).
    pub fn new(
        node_count: usize,
        peer_pairs: &[(NodeId, NodeId)],
        cp_pairs: &[(NodeId, NodeId)],
    ) -> Result<Self, GraphError> {
        let check = |x: NodeId| {
            if (x as usize) < node_count {
                Ok(())
            } else {
                Err(GraphError::NodeOutOfRange { node: x, node_count })
            }
        };
        let mut seen: HashMap<(NodeId, NodeId), bool> =
            HashMap::with_capacity(peer_pairs.len() + cp_pairs.len());
        let mut peer_edges = Vec::with_capacity(peer_pairs.len());
        for &(a, b) in peer_pairs {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let key = (a.min(b), a.max(b));
            match seen.insert(key, true) {
                None => peer_edges.push(key),
                Some(true) => return Err(GraphError::Duplicate { kind: "peer", a, b }),
                Some(false) => return Err(GraphError::Conflict { a, b }),
            }
        }
        let mut cp_edges = Vec::with_capacity(cp_pairs.len());
        for &(c, p) in cp_pairs {
            check(c)?;
            check(p)?;
            if c == p {
                return Err(GraphError::SelfLoop(c));
            }
            let key = (c.min(p), c.max(p));
            match seen.insert(key, false) {
                None => cp_edges.push((c, p)),
                Some(false) if cp_edges.contains(&(c, p)) => {
                    return Err(GraphError::Duplicate { kind: "customer-provider", a: c, b: p })
                }
                Some(_) => return Err(GraphError::Conflict { a: c, b: p }),
            }
        }
        Ok(Self::from_sorted_parts(node_count, peer_edges, cp_edges))
    }

    /// Like [`LabeledAsGraph::new`] with `node_count = max id + 1`.
    pub fn from_edges(
        peer_pairs: &[(NodeId, NodeId)],
        cp_pairs: &[(NodeId, NodeId)],
    ) -> Result<Self, GraphError> {
        let n = peer_pairs
            .iter()
            .chain(cp_pairs)
            .map(|&(a, b)| a.max(b) as usize + 1)
            .max()
            .unwrap_or(0);
        Self::new(n, peer_pairs, cp_pairs)
    }

    /// Builds without validation. Callers guarantee the invariants.
    pub(crate) fn from_sorted_parts(
        node_count: usize,
        mut peer_edges: Vec<(NodeId, NodeId)>,
        mut cp_edges: Vec<(NodeId, NodeId)>,
    ) -> Self {
        peer_edges.sort_unstable();
        cp_edges.sort_unstable();
        let peers = Adjacency::build(
            node_count,
            peer_edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]),
        );
        let providers = Adjacency::build(node_count, cp_edges.iter().copied());
        let customers = Adjacency::build(node_count, cp_edges.iter().map(|&(c, p)| (p, c)));
        LabeledAsGraph { node_count, peer_edges, cp_edges, peers, providers, customers }
    }

    pub fn empty(node_count: usize) -> Self {
        Self::from_sorted_parts(node_count, Vec::new(), Vec::new())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.node_count as NodeId
    }

    pub fn peer_edges(&self) -> &[(NodeId, NodeId)] {
        &self.peer_edges
    }

    /// `(customer, provider)` pairs.
    pub fn cp_edges(&self) -> &[(NodeId, NodeId)] {
        &self.cp_edges
    }

    pub fn edge_count(&self) -> usize {
        self.peer_edges.len() + self.cp_edges.len()
    }

    pub fn peers(&self, u: NodeId) -> &[NodeId] {
        self.peers.of(u)
    }

    pub fn providers(&self, u: NodeId) -> &[NodeId] {
        self.providers.of(u)
    }

    pub fn customers(&self, u: NodeId) -> &[NodeId] {
        self.customers.of(u)
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.peers(u).len() + self.providers(u).len() + self.customers(u).len()
    }

    pub fn link(&self, u: NodeId, v: NodeId) -> Option<Link> {
        if self.peers(u).binary_search(&v).is_ok() {
            Some(Link::Peer)
        } else if self.providers(u).binary_search(&v).is_ok() {
            Some(Link::Provider)
        } else if self.customers(u).binary_search(&v).is_ok() {
            Some(Link::Customer)
        } else {
            None
        }
    }

    pub fn has_peer_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.peers(u).binary_search(&v).is_ok()
    }

    /// Every node with at most one provider and no provider cycle.
    pub fn is_cp_forest(&self) -> bool {
        self.nodes().all(|u| self.providers(u).len() <= 1) && !self.has_provider_cycle()
    }

    /// True iff the customer→provider subgraph contains a directed cycle.
    pub fn has_provider_cycle(&self) -> bool {
        self.top_down_order().len() != self.node_count
    }

    /// `u` together with every node reachable from `u` by provider→customer
    /// steps, sorted ascending.
    pub fn customer_cone(&self, u: NodeId) -> Vec<NodeId> {
        let mut mark = vec![false; self.node_count];
        let mut out = Vec::new();
        self.collect_cone(u, &mut mark, &mut out);
        for &x in &out {
            mark[x as usize] = false;
        }
        out.sort_unstable();
        out
    }

    fn collect_cone(&self, u: NodeId, mark: &mut [bool], out: &mut Vec<NodeId>) {
        let start = out.len();
        mark[u as usize] = true;
        out.push(u);
        let mut head = start;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &c in self.customers(x) {
                if !mark[c as usize] {
                    mark[c as usize] = true;
                    out.push(c);
                }
            }
        }
    }

    /// Cone size `|t(u)|` of every node.
    ///
    /// Forests use a bottom-up subtree sum; general DAGs fall back to one
    /// traversal per node so shared descendants are counted once per cone.
    pub fn cone_sizes(&self) -> Vec<usize> {
        let n = self.node_count;
        if self.is_cp_forest() {
            let order = self.top_down_order();
            let mut size = vec![1usize; n];
            for &u in order.iter().rev() {
                if let Some(&p) = self.providers(u).first() {
                    size[p as usize] += size[u as usize];
                }
            }
            return size;
        }
        let mut mark = vec![false; n];
        let mut buf = Vec::new();
        (0..n as NodeId)
            .map(|u| {
                buf.clear();
                self.collect_cone(u, &mut mark, &mut buf);
                for &x in &buf {
                    mark[x as usize] = false;
                }
                buf.len()
            })
            .collect()
    }

    /// Providers before customers. Nodes on provider cycles are omitted.
    pub(crate) fn top_down_order(&self) -> Vec<NodeId> {
        let n = self.node_count;
        let mut remaining: Vec<usize> = (0..n as NodeId).map(|u| self.providers(u).len()).collect();
        let mut order: Vec<NodeId> =
            (0..n as NodeId).filter(|&u| remaining[u as usize] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let p = order[head];
            head += 1;
            for &c in self.customers(p) {
                remaining[c as usize] -= 1;
                if remaining[c as usize] == 0 {
                    order.push(c);
                }
            }
        }
        order
    }

    /// Same edges with the peer edge `{u, v}` or the cp edge between `u`
    /// and `v` removed.
    pub fn without_edge(&self, u: NodeId, v: NodeId) -> Self {
        let key = (u.min(v), u.max(v));
        let peers = self.peer_edges.iter().copied().filter(|&e| e != key).collect();
        let cps = self
            .cp_edges
            .iter()
            .copied()
            .filter(|&(c, p)| (c.min(p), c.max(p)) != key)
            .collect();
        Self::from_sorted_parts(self.node_count, peers, cps)
    }

    /// Undirected simple adjacency over all edges regardless of label.
    pub fn undirected(&self) -> UndirectedView {
        let n = self.node_count;
        let arcs = self
            .peer_edges
            .iter()
            .chain(&self.cp_edges)
            .flat_map(|&(a, b)| [(a, b), (b, a)]);
        let adj = Adjacency::build(n, arcs);
        UndirectedView { adj }
    }
}

/// Label-blind adjacency used by distance and clustering metrics.
#[derive(Clone, Debug)]
pub struct UndirectedView {
    adj: Adjacency,
}

impl UndirectedView {
    pub fn node_count(&self) -> usize {
        self.adj.offsets.len() - 1
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        self.adj.of(u)
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj.of(u).len()
    }

    pub(crate) fn raw(&self) -> (&[usize], &[NodeId]) {
        (&self.adj.offsets, &self.adj.targets)
    }
}
