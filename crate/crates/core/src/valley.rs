//! Valley-free reachability and the three-valued communication distance.
//!
//! A valley-free path climbs customer→provider edges, crosses at most one
//! peer edge, then descends provider→customer edges. The distance from `u`
//! to `v` is `Zero` when some valley-free path leaves `u` through a peer or a
//! customer, `One` when every valley-free path leaves through a provider, and
//! `Unreachable` when none exists.

use crate::graph::{LabeledAsGraph, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VfDistance {
    Zero,
    One,
    Unreachable,
}

impl VfDistance {
    pub fn as_f64(self) -> f64 {
        match self {
            VfDistance::Zero => 0.0,
            VfDistance::One => 1.0,
            VfDistance::Unreachable => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        self != VfDistance::Unreachable
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Up = 0,
    Peer = 1,
    Down = 2,
}

/// Product-graph BFS over (node, phase). Returns the set of nodes visited in
/// any phase, seeded from `seeds`.
fn reach(g: &LabeledAsGraph, seeds: &[(NodeId, Phase)]) -> Vec<bool> {
    let n = g.node_count();
    let mut seen = vec![[false; 3]; n];
    let mut stack: Vec<(NodeId, Phase)> = Vec::new();
    for &(x, ph) in seeds {
        if !seen[x as usize][ph as usize] {
            seen[x as usize][ph as usize] = true;
            stack.push((x, ph));
        }
    }
    let push = |seen: &mut Vec<[bool; 3]>, stack: &mut Vec<_>, y: NodeId, ph: Phase| {
        if !seen[y as usize][ph as usize] {
            seen[y as usize][ph as usize] = true;
            stack.push((y, ph));
        }
    };
    while let Some((x, ph)) = stack.pop() {
        if ph == Phase::Up {
            for &y in g.providers(x) {
                push(&mut seen, &mut stack, y, Phase::Up);
            }
            for &y in g.peers(x) {
                push(&mut seen, &mut stack, y, Phase::Peer);
            }
        }
        // Up, Peer and Down may all continue downwards.
        for &y in g.customers(x) {
            push(&mut seen, &mut stack, y, Phase::Down);
        }
    }
    seen.into_iter().map(|s| s[0] || s[1] || s[2]).collect()
}

/// Distances from `u` to every node. The entry for `u` itself is `Zero`.
pub fn valley_free_distances_from(g: &LabeledAsGraph, u: NodeId) -> Vec<VfDistance> {
    let mut free_seeds: Vec<(NodeId, Phase)> =
        g.peers(u).iter().map(|&p| (p, Phase::Peer)).collect();
    free_seeds.extend(g.customers(u).iter().map(|&c| (c, Phase::Down)));
    let free = reach(g, &free_seeds);
    let any = reach(g, &[(u, Phase::Up)]);
    let mut out: Vec<VfDistance> = free
        .iter()
        .zip(&any)
        .map(|(&f, &a)| {
            if f {
                VfDistance::Zero
            } else if a {
                VfDistance::One
            } else {
                VfDistance::Unreachable
            }
        })
        .collect();
    out[u as usize] = VfDistance::Zero;
    out
}

/// Distance between `u ≠ v`.
pub fn valley_free_distance(g: &LabeledAsGraph, u: NodeId, v: NodeId) -> VfDistance {
    valley_free_distances_from(g, u)[v as usize]
}

#[cfg(test)]
mod tests {
    use super::*;
    use VfDistance::*;

    #[test]
    fn peer_edge_is_free_both_ways() {
        let g = LabeledAsGraph::from_edges(&[(0, 1)], &[]).unwrap();
        assert_eq!(valley_free_distance(&g, 0, 1), Zero);
        assert_eq!(valley_free_distance(&g, 1, 0), Zero);
    }

    #[test]
    fn customer_pays_provider_does_not() {
        let g = LabeledAsGraph::from_edges(&[], &[(0, 1)]).unwrap();
        assert_eq!(valley_free_distance(&g, 0, 1), One);
        assert_eq!(valley_free_distance(&g, 1, 0), Zero);
    }

    #[test]
    fn valley_is_unreachable() {
        // m=0 is a customer of both a=1 and b=2.
        let g = LabeledAsGraph::from_edges(&[], &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(valley_free_distance(&g, 1, 2), Unreachable);
        assert_eq!(valley_free_distance(&g, 2, 1), Unreachable);
    }

    #[test]
    fn two_peer_hops_are_invalid() {
        let g = LabeledAsGraph::from_edges(&[(0, 1), (1, 2)], &[]).unwrap();
        assert_eq!(valley_free_distance(&g, 0, 2), Unreachable);
    }

    #[test]
    fn sibling_via_shared_provider() {
        let g = LabeledAsGraph::from_edges(&[], &[(1, 0), (2, 0)]).unwrap();
        assert_eq!(valley_free_distance(&g, 1, 2), One);
    }

    #[test]
    fn up_peer_down() {
        // 2 -> 0 (up), 0 -- 1 peer, 1 -> 3 (down)
        let g = LabeledAsGraph::from_edges(&[(0, 1)], &[(2, 0), (3, 1)]).unwrap();
        assert_eq!(valley_free_distance(&g, 2, 3), One);
        assert_eq!(valley_free_distance(&g, 0, 3), Zero);
        assert_eq!(valley_free_distance(&g, 3, 2), One);
    }
}
