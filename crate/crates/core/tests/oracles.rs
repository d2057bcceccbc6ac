mod support;

use astopo::{valley_free_distance, LabeledAsGraph, VfDistance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::*;

#[test]
fn valley_free_distance_matches_path_enumeration() {
    let (pairs, mismatches) = valley_free_agreement(1500, 11);
    assert!(pairs > 10_000);
    assert_eq!(mismatches, 0);
}

#[test]
fn oracle_agrees_on_hand_cases() {
    let valley = LabeledAsGraph::from_edges(&[], &[(0, 1), (0, 2)]).unwrap();
    assert_eq!(brute_force_distance(&valley, 1, 2), VfDistance::Unreachable);
    assert_eq!(valley_free_distance(&valley, 1, 2), VfDistance::Unreachable);
    let up_peer_down = LabeledAsGraph::from_edges(&[(0, 1)], &[(2, 0), (3, 1)]).unwrap();
    assert_eq!(brute_force_distance(&up_peer_down, 2, 3), VfDistance::One);
    assert_eq!(brute_force_distance(&up_peer_down, 0, 3), VfDistance::Zero);
}

#[test]
fn cones_match_transitive_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let n = rand::Rng::gen_range(&mut rng, 1..=8);
        let g = random_graph(&mut rng, n, 0.5);
        let oracle = closure_cones(&g);
        let sizes = g.cone_sizes();
        for u in g.nodes() {
            let cone = g.customer_cone(u);
            assert!(cone.contains(&u));
            assert_eq!(cone, oracle[u as usize], "{g:?} node {u}");
            assert_eq!(sizes[u as usize], cone.len());
        }
    }
}

#[test]
fn multihomed_customer_counts_in_both_cones() {
    let g = LabeledAsGraph::from_edges(&[], &[(3, 1), (3, 2)]).unwrap();
    assert_eq!(g.customer_cone(1), vec![1, 3]);
    assert_eq!(g.customer_cone(2), vec![2, 3]);
}
