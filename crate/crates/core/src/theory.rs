//! Mean-field analysis of the hyperbolic generator: attachment probabilities,
//! the expected customer-cone profile `T̄(r)`, peering probabilities, and
//! game-cost estimates from measured topologies.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::game::{clique_size_bound, cone_size_bound, GameError, GameParams};
use crate::graph::LabeledAsGraph;
use crate::spider::top_clique;
use crate::yeas::{hdist, HyperbolicPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TheoryError {
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParam { name: &'static str, value: f64, reason: &'static str },
    #[error("cone profile solve produced a non-finite value at r = {0}")]
    NonFinite(f64),
    #[error("graph has no {0} edges")]
    NoEdges(&'static str),
    #[error("no snapshots given")]
    NoSnapshots,
    #[error(transparent)]
    Game(#[from] GameError),
}

fn invalid(name: &'static str, value: f64, reason: &'static str) -> TheoryError {
    TheoryError::InvalidParam { name, value, reason }
}

/// Node count, disk radius and the large-`R` density `δ = n / (π e^R)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoryContext {
    pub n: usize,
    pub radius: f64,
    pub delta: f64,
}

impl TheoryContext {
    pub fn new(n: usize, radius: f64) -> Result<Self, TheoryError> {
        if n == 0 {
            return Err(invalid("n", 0.0, "must be positive"));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(invalid("radius", radius, "must be positive and finite"));
        }
        Ok(TheoryContext { n, radius, delta: n as f64 / (PI * radius.exp()) })
    }

    /// Approximate radial density `e^(s−R) / 2π`.
    pub fn radial_density(&self, s: f64) -> f64 {
        (s - self.radius).exp() / (2.0 * PI)
    }
}

/// Below this distance the area approximation is flagged as unreliable.
pub const AREA_VALIDITY_MIN: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Area {
    pub value: f64,
    /// False when `l` is too close to 0 for the approximation to hold.
    pub valid: bool,
}

/// Area of the lens between the disk of radius `s` around the origin and the
/// disk of radius `l` around a point at radius `s`: `4 e^(l/2)`.
pub fn intersection_area(l: f64) -> Area {
    Area { value: 4.0 * (l / 2.0).exp(), valid: l >= AREA_VALIDITY_MIN }
}

/// Probability that no other node lies in the lens of a pair at distance `l`,
/// i.e. that the nearer-to-center node is the other's nearest predecessor.
pub fn connect_prob(ctx: &TheoryContext, l: f64) -> f64 {
    (-ctx.delta * intersection_area(l).value).exp()
}

/// `∫_0^{2π} connect_prob(l(s, φ, r, 0)) dφ` by importance-sampled Monte
/// Carlo, with the exact hyperbolic distance. For large `s + r` this tends to
/// `e^{−(s+r)/2} / δ`, the reduction behind the one-dimensional cone equation.
pub fn angle_integral_mc(ctx: &TheoryContext, s: f64, r: f64, samples: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Near φ = 0 the integrand decays like exp(−2δ e^{(s+r)/2} φ).
    let lambda = (2.0 * ctx.delta * ((s + r) / 2.0).exp()).max(1e-9);
    let mass = -(-lambda * PI).exp_m1();
    let a = HyperbolicPoint { r: s, phi: 0.0 };
    let mut acc = 0.0;
    for _ in 0..samples {
        let u: f64 = rng.gen();
        let x = -(-u * mass).ln_1p() / lambda;
        let density = lambda * (-lambda * x).exp() / mass;
        let b = HyperbolicPoint { r, phi: x };
        acc += connect_prob(ctx, hdist(&a, &b)) / density;
    }
    // symmetric in φ ↦ 2π − φ
    2.0 * acc / samples as f64
}

pub const MIN_GRID: usize = 64;
pub const DEFAULT_GRID: usize = 1024;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Quadrature {
    Trapezoid,
    /// Trapezoid on `N` and `2N − 1` points combined by one Richardson step.
    #[default]
    Richardson,
}

/// `T̄(r)` on a uniform grid over `[0, R]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl ConeProfile {
    pub fn radius(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// Interpolation linear in `ln T̄`, clamped to the grid ends.
    pub fn value_at(&self, r: f64) -> f64 {
        let last = self.grid.len() - 1;
        let h = self.radius() / last as f64;
        let x = (r / h).clamp(0.0, last as f64);
        let i = (x.floor() as usize).min(last - 1);
        let w = x - i as f64;
        (self.values[i].ln() * (1.0 - w) + self.values[i + 1].ln() * w).exp()
    }

    /// `T̄(R/2)`, the cone size at which peering becomes certain.
    pub fn half_radius_value(&self) -> f64 {
        self.value_at(self.radius() / 2.0)
    }
}

/// Solve `T̄(r) = 1 + ½ ∫_r^R T̄(s) e^{(s−r)/2} ds` backward from `T̄(R) = 1`.
pub fn solve_cone_profile(radius: f64, grid_size: usize) -> Result<ConeProfile, TheoryError> {
    solve_cone_profile_with(radius, grid_size, Quadrature::default())
}

pub fn solve_cone_profile_with(radius: f64, grid_size: usize, quad: Quadrature) -> Result<ConeProfile, TheoryError> {
    if grid_size < MIN_GRID {
        return Err(invalid("grid_size", grid_size as f64, "must be at least 64"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(invalid("radius", radius, "must be positive and finite"));
    }
    let coarse = trapezoid_solve(radius, grid_size);
    let values = match quad {
        Quadrature::Trapezoid => coarse,
        Quadrature::Richardson => {
            let fine = trapezoid_solve(radius, 2 * grid_size - 1);
            coarse.iter().enumerate().map(|(i, &c)| (4.0 * fine[2 * i] - c) / 3.0).collect()
        }
    };
    let h = radius / (grid_size - 1) as f64;
    let grid: Vec<f64> = (0..grid_size).map(|i| i as f64 * h).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(TheoryError::NonFinite(grid[i]));
    }
    Ok(ConeProfile { grid, values })
}

/// Backward trapezoid sweep; the history sum is carried in O(1) per step.
fn trapezoid_solve(radius: f64, n: usize) -> Vec<f64> {
    let h = radius / (n - 1) as f64;
    let growth = (h / 2.0).exp();
    let mut t = vec![0.0; n];
    t[n - 1] = 1.0;
    // interior sum Σ_{j=i+1}^{n−2} T_j e^{(r_j − r_i)/2}
    let mut interior = 0.0;
    for i in (0..n - 1).rev() {
        if i < n - 2 {
            interior = growth * (interior + t[i + 1]);
        }
        let endpoint = 0.5 * ((radius - i as f64 * h) / 2.0).exp();
        t[i] = (1.0 + 0.5 * h * (interior + endpoint)) / (1.0 - h / 4.0);
    }
    t
}

/// Width of the interval just above `R/2` over which the exact peering
/// probability is blended into 1.
pub const CROSSFADE_WIDTH: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeeringProb {
    pub exact: f64,
    pub approx: f64,
}

/// Rounding pushes the arguments slightly outside `[−1, 1]` near the ends of
/// the range; anything beyond that is a caller error caught in debug builds.
fn acos_clamped(x: f64) -> f64 {
    debug_assert!(x.abs() <= 1.0 + 1e-9, "acos argument {x}");
    x.clamp(-1.0, 1.0).acos()
}

/// Lens-area ratio for `R/2 < r2 ≤ R`.
fn peering_lens(r2: f64, radius: f64) -> f64 {
    let (c2, s2) = (r2.cosh(), r2.sinh());
    let (cr, sr) = (radius.cosh(), radius.sinh());
    let first = acos_clamped((c2 * c2 - cr) / (s2 * s2)) / PI;
    let second = (radius - r2).exp() * acos_clamped((c2 * cr - c2) / (s2 * sr)) / PI;
    first + second
}

/// Probability that a node at radius `r2` peers with a uniformly placed node
/// of smaller radius: the lens-area ratio and its exponential approximation.
pub fn peering_prob(r2: f64, radius: f64) -> Result<PeeringProb, TheoryError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(invalid("radius", radius, "must be positive and finite"));
    }
    if !(r2 > 0.0 && r2 <= radius) {
        return Err(invalid("r2", r2, "must lie in (0, R]"));
    }
    let half = radius / 2.0;
    let approx = if r2 < half { 1.0 } else { (half - r2).exp() };
    let exact = if r2 <= half {
        1.0
    } else if r2 < half + CROSSFADE_WIDTH {
        let w = (r2 - half) / CROSSFADE_WIDTH;
        (1.0 - w) + w * peering_lens(r2, radius)
    } else {
        peering_lens(r2, radius)
    };
    Ok(PeeringProb { exact, approx })
}

/// Peering probability of a node with expected cone size `t2`:
/// `min(1, t2 / T̄(R/2))`.
pub fn peering_prob_by_cone(t2: f64, profile: &ConeProfile) -> f64 {
    (t2 / profile.half_radius_value()).min(1.0)
}

/// `φ_p = n·c1 / #cp-edges`, `φ_r = n·c2 / #peer-edges`.
pub fn estimate_phis(g: &LabeledAsGraph, c1: f64, c2: f64) -> Result<GameParams, TheoryError> {
    phis_from_counts(g.node_count(), g.cp_edges().len(), g.peer_edges().len(), c1, c2)
}

pub fn phis_from_counts(n: usize, cp: usize, peer: usize, c1: f64, c2: f64) -> Result<GameParams, TheoryError> {
    if cp == 0 {
        return Err(TheoryError::NoEdges("customer-provider"));
    }
    if peer == 0 {
        return Err(TheoryError::NoEdges("peer"));
    }
    Ok(GameParams::new(n as f64 * c1 / cp as f64, n as f64 * c2 / peer as f64)?)
}

pub const DEFAULT_C1: f64 = 1.1;
pub const DEFAULT_C2: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub label: String,
    pub nodes: usize,
    pub peer_edges: usize,
    pub cp_edges: usize,
    pub phi_p: f64,
    pub phi_r: f64,
    pub clique_bound: f64,
    pub tier1_size: usize,
    pub cone_bound: f64,
    pub max_tier1_cone: usize,
    pub max_cone: usize,
}

/// Bounds against measured values, one row per snapshot.
pub fn bound_timeseries(snapshots: &[(String, LabeledAsGraph)], c1: f64, c2: f64) -> Result<Vec<BoundRow>, TheoryError> {
    if snapshots.is_empty() {
        return Err(TheoryError::NoSnapshots);
    }
    snapshots
        .iter()
        .map(|(label, g)| {
            let params = estimate_phis(g, c1, c2)?;
            let clique = top_clique(g);
            let cones = g.cone_sizes();
            Ok(BoundRow {
                label: label.clone(),
                nodes: g.node_count(),
                peer_edges: g.peer_edges().len(),
                cp_edges: g.cp_edges().len(),
                phi_p: params.phi_p,
                phi_r: params.phi_r,
                clique_bound: clique_size_bound(params)?,
                tier1_size: clique.len(),
                cone_bound: cone_size_bound(g.node_count(), clique.len().max(1), params)?,
                max_tier1_cone: clique.iter().map(|&u| cones[u as usize]).max().unwrap_or(0),
                max_cone: cones.iter().copied().max().unwrap_or(0),
            })
        })
        .collect()
}
