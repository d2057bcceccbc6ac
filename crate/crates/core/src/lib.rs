//! Topology laboratory for the AS-level Internet.
//!
//! * [`graph`]: labeled AS graphs with peer and customer→provider edges.
//! * [`valley`]: valley-free reachability and the 0/1/∞ communication distance.
//! * [`spider`]: Spider-graph recognition and clique coverage.
//! * [`game`]: the network-formation game, equilibrium checks and bounds.
//! * [`yeas`]: the hyperbolic-disk topology generator.
//! * [`metrics`]: degree, clustering, distance, cone and peering statistics.
//! * [`theory`]: the mean-field cone profile and peering probabilities.
//! * [`io`]: pipe-delimited relationship files.

pub mod game;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod spider;
pub mod theory;
pub mod valley;
pub mod yeas;

pub use game::{
    clique_size_bound, cone_size_bound, cost, enumerate_equilibria, induce_graph, is_cpe,
    is_pairwise_stable, Action, GameError, GameParams, StrategyProfile,
};
pub use graph::{GraphError, LabeledAsGraph, Link, NodeId};
pub use io::{parse_caida, write_graph, SnapshotMeta};
pub use spider::{spider_coverage, top_clique, verify_spider, SpiderReport};
pub use valley::{valley_free_distance, valley_free_distances_from, VfDistance};
pub use yeas::{generate, YeasOutput, YeasParams};
