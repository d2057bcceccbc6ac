//! Spider-graph recognition: a tier-1 peer clique, provider trees hanging
//! from it, and extra peer edges only between nodes with disjoint cones.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{GraphError, LabeledAsGraph, NodeId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpiderReport {
    /// Provider-free nodes.
    pub clique_nodes: Vec<NodeId>,
    pub is_peer_clique: bool,
    /// Every non-clique node has exactly one provider and its provider chain
    /// ends in the clique.
    pub forest_ok: bool,
    /// Number of `(u, {v, w})` triples where `v` and `w` are peers of `u`
    /// whose cones intersect. Pairs where both edges are clique-internal are
    /// exempt.
    pub cone_disjointness_violations: usize,
    /// True when some node had more peer pairs than the cap and was sampled.
    pub sampled: bool,
    pub is_spider: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SpiderOptions {
    /// Nodes with more peer-neighbor pairs than this are checked on a
    /// seeded sample of pairs.
    pub max_pairs_per_node: usize,
    pub seed: u64,
}

impl Default for SpiderOptions {
    fn default() -> Self {
        SpiderOptions { max_pairs_per_node: 10_000, seed: 0 }
    }
}

pub fn verify_spider(g: &LabeledAsGraph) -> SpiderReport {
    verify_spider_with(g, SpiderOptions::default())
}

pub fn verify_spider_with(g: &LabeledAsGraph, opts: SpiderOptions) -> SpiderReport {
    let n = g.node_count();
    let clique_nodes: Vec<NodeId> = g.nodes().filter(|&u| g.providers(u).is_empty()).collect();
    let is_peer_clique = clique_nodes
        .iter()
        .enumerate()
        .all(|(i, &a)| clique_nodes[i + 1..].iter().all(|&b| g.has_peer_edge(a, b)));
    let mut in_clique = vec![false; n];
    for &k in &clique_nodes {
        in_clique[k as usize] = true;
    }
    // With clique = provider-free nodes, single providers everywhere and no
    // cycle means every chain ends in the clique.
    let forest_ok = g.is_cp_forest();

    let overlap = ConeOverlap::new(g, forest_ok);
    let mut violations = 0usize;
    let mut sampled = false;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for u in g.nodes() {
        let peers = g.peers(u);
        let k = peers.len();
        if k < 2 {
            continue;
        }
        let total = k * (k - 1) / 2;
        let mut check = |i: usize, j: usize| {
            let (v, w) = (peers[i], peers[j]);
            let internal = |x: NodeId| in_clique[u as usize] && in_clique[x as usize];
            if internal(v) && internal(w) {
                return;
            }
            if overlap.intersects(v, w) {
                violations += 1;
            }
        };
        if total <= opts.max_pairs_per_node {
            for i in 0..k {
                for j in i + 1..k {
                    check(i, j);
                }
            }
        } else {
            sampled = true;
            for idx in sample(&mut rng, total, opts.max_pairs_per_node).into_iter() {
                let (i, j) = unrank_pair(idx, k);
                check(i, j);
            }
        }
    }
    SpiderReport {
        is_spider: is_peer_clique && forest_ok && violations == 0,
        clique_nodes,
        is_peer_clique,
        forest_ok,
        cone_disjointness_violations: violations,
        sampled,
    }
}

/// Maps `idx < k(k-1)/2` to the pair `(i, j)`, `i < j`, in row-major order.
fn unrank_pair(mut idx: usize, k: usize) -> (usize, usize) {
    let mut i = 0;
    loop {
        let row = k - 1 - i;
        if idx < row {
            return (i, i + 1 + idx);
        }
        idx -= row;
        i += 1;
    }
}

enum ConeOverlap<'a> {
    /// Pre/post DFS stamps: on a forest two cones meet iff one root is an
    /// ancestor of the other.
    Forest { enter: Vec<u32>, exit: Vec<u32> },
    Dag { g: &'a LabeledAsGraph },
}

impl<'a> ConeOverlap<'a> {
    fn new(g: &'a LabeledAsGraph, forest: bool) -> Self {
        if !forest {
            return ConeOverlap::Dag { g };
        }
        let n = g.node_count();
        let mut enter = vec![0u32; n];
        let mut exit = vec![0u32; n];
        let mut clock = 0u32;
        let mut stack: Vec<(NodeId, usize)> = Vec::new();
        for root in g.nodes().filter(|&u| g.providers(u).is_empty()) {
            enter[root as usize] = clock;
            clock += 1;
            stack.push((root, 0));
            while let Some(&mut (x, ref mut next)) = stack.last_mut() {
                let cs = g.customers(x);
                if *next < cs.len() {
                    let c = cs[*next];
                    *next += 1;
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
        ConeOverlap::Forest { enter, exit }
    }

    fn intersects(&self, v: NodeId, w: NodeId) -> bool {
        match self {
            ConeOverlap::Forest { enter, exit } => {
                let anc = |a: NodeId, b: NodeId| {
                    enter[a as usize] <= enter[b as usize] && exit[b as usize] <= exit[a as usize]
                };
                anc(v, w) || anc(w, v)
            }
            ConeOverlap::Dag { g } => {
                let a = g.customer_cone(v);
                let b = g.customer_cone(w);
                sorted_intersect(&a, &b)
            }
        }
    }
}

fn sorted_intersect(a: &[NodeId], b: &[NodeId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Largest mutually peering set among provider-free nodes. Ties go to the
/// lexicographically smallest sorted member list.
pub fn top_clique(g: &LabeledAsGraph) -> Vec<NodeId> {
    let candidates: Vec<NodeId> = g.nodes().filter(|&u| g.providers(u).is_empty()).collect();
    max_clique(g, &candidates)
}

/// Exact maximum clique of the peer graph induced on `candidates`
/// (Bron–Kerbosch with pivoting).
pub fn max_clique(g: &LabeledAsGraph, candidates: &[NodeId]) -> Vec<NodeId> {
    let mut best: Vec<NodeId> = Vec::new();
    let mut r = Vec::new();
    let mut p: Vec<NodeId> = candidates.to_vec();
    p.sort_unstable();
    bron_kerbosch(g, &mut r, p, Vec::new(), &mut best);
    best.sort_unstable();
    best
}

fn bron_kerbosch(
    g: &LabeledAsGraph,
    r: &mut Vec<NodeId>,
    p: Vec<NodeId>,
    x: Vec<NodeId>,
    best: &mut Vec<NodeId>,
) {
    if p.is_empty() && x.is_empty() {
        let mut cand = r.clone();
        cand.sort_unstable();
        if cand.len() > best.len() || (cand.len() == best.len() && cand < *best) {
            *best = cand;
        }
        return;
    }
    if r.len() + p.len() < best.len() {
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| g.has_peer_edge(u, v)).count())
        .expect("p or x nonempty");
    let branch: Vec<NodeId> = p.iter().copied().filter(|&v| !g.has_peer_edge(pivot, v)).collect();
    let mut p = p;
    let mut x = x;
    for v in branch {
        let np: Vec<NodeId> = p.iter().copied().filter(|&w| g.has_peer_edge(v, w)).collect();
        let nx: Vec<NodeId> = x.iter().copied().filter(|&w| g.has_peer_edge(v, w)).collect();
        r.push(v);
        bron_kerbosch(g, r, np, nx, best);
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// Fraction of nodes reached from the top clique by provider→customer steps.
pub fn spider_coverage(g: &LabeledAsGraph) -> Result<f64, GraphError> {
    let n = g.node_count();
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let clique = top_clique(g);
    let mut seen = vec![false; n];
    let mut stack = clique.clone();
    for &k in &clique {
        seen[k as usize] = true;
    }
    let mut reached = clique.len();
    while let Some(x) = stack.pop() {
        for &c in g.customers(x) {
            if !seen[c as usize] {
                seen[c as usize] = true;
                reached += 1;
                stack.push(c);
            }
        }
    }
    Ok(reached as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spider() -> LabeledAsGraph {
        LabeledAsGraph::from_edges(&[(1, 2)], &[(3, 1), (4, 2)]).unwrap()
    }

    #[test]
    fn spider_by_construction() {
        // node 0 is unused here; drop it by relabeling
        let g = LabeledAsGraph::from_edges(&[(0, 1)], &[(2, 0), (3, 1)]).unwrap();
        let rep = verify_spider(&g);
        assert_eq!(rep.clique_nodes, vec![0, 1]);
        assert!(rep.is_peer_clique && rep.forest_ok && rep.is_spider);
        assert_eq!(spider_coverage(&g).unwrap(), 1.0);
    }

    #[test]
    fn isolated_zero_node_breaks_clique() {
        // from_edges over ids 1..4 leaves node 0 isolated and provider-free.
        let rep = verify_spider(&small_spider());
        assert!(!rep.is_peer_clique);
        assert!(!rep.is_spider);
    }

    #[test]
    fn second_provider_breaks_forest() {
        let g = LabeledAsGraph::from_edges(&[(0, 1)], &[(2, 0), (3, 1), (2, 1)]).unwrap();
        let rep = verify_spider(&g);
        assert!(rep.is_peer_clique);
        assert!(!rep.forest_ok);
        assert!(!rep.is_spider);
    }

    #[test]
    fn overlapping_peer_cones_counted() {
        // clique {0,1}; 2 under 0, 3 under 1, 4 under 2.
        // node 3 peers with 2 and with 4, and 4 ∈ t(2).
        let g = LabeledAsGraph::from_edges(&[(0, 1), (3, 2), (3, 4)], &[(2, 0), (3, 1), (4, 2)])
            .unwrap();
        let rep = verify_spider(&g);
        assert!(rep.forest_ok && rep.is_peer_clique);
        assert_eq!(rep.cone_disjointness_violations, 1);
        assert!(!rep.is_spider);
    }

    #[test]
    fn clique_member_peering_into_foreign_tree_is_violation() {
        // 0 peers with 1 (clique) and with 3 ∈ t(1).
        let g = LabeledAsGraph::from_edges(&[(0, 1), (0, 3)], &[(2, 0), (3, 1)]).unwrap();
        let rep = verify_spider(&g);
        assert_eq!(rep.cone_disjointness_violations, 1);
    }

    #[test]
    fn dag_overlap_uses_cone_sets() {
        // 4 has providers 2 and 3; 1 peers with 2 and 3.
        let g = LabeledAsGraph::from_edges(&[(1, 2), (1, 3)], &[(4, 2), (4, 3), (2, 0), (3, 0), (1, 0)])
            .unwrap();
        let rep = verify_spider(&g);
        assert!(!rep.forest_ok);
        assert_eq!(rep.cone_disjointness_violations, 1);
    }

    #[test]
    fn pair_sampling_caps_work() {
        let peers: Vec<(NodeId, NodeId)> = (1..8).map(|v| (0, v)).collect();
        let g = LabeledAsGraph::from_edges(&peers, &[]).unwrap();
        let rep = verify_spider_with(&g, SpiderOptions { max_pairs_per_node: 5, seed: 3 });
        assert!(rep.sampled);
        assert_eq!(rep.cone_disjointness_violations, 0);
        for k in 2..7 {
            let total = k * (k - 1) / 2;
            let pairs: Vec<_> = (0..total).map(|i| unrank_pair(i, k)).collect();
            let mut expect = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    expect.push((i, j));
                }
            }
            assert_eq!(pairs, expect);
        }
    }

    #[test]
    fn coverage_with_isolated_node() {
        let g = LabeledAsGraph::new(6, &[(0, 1)], &[(2, 0), (3, 1), (4, 2)]).unwrap();
        assert!((spider_coverage(&g).unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(spider_coverage(&LabeledAsGraph::empty(0)), Err(GraphError::Empty));
    }

    #[test]
    fn top_clique_picks_largest() {
        let g = LabeledAsGraph::from_edges(&[(0, 1), (0, 2), (1, 2), (3, 4)], &[]).unwrap();
        assert_eq!(top_clique(&g), vec![0, 1, 2]);
    }
}
