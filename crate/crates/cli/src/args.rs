use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "astopo", version, about = "AS-level topology analysis and generation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a topology with the hyperbolic-disk model.
    Generate(GenerateArgs),
    /// Size, clustering and distance statistics; optional CCDF curves.
    Metrics(MetricsArgs),
    /// Spider-graph check and clique coverage.
    Spider(GraphArg),
    /// Cone overlap between peers of a common AS.
    Overlap(OverlapArgs),
    /// Peering likelihood binned by the smaller cone size.
    Peering(PeeringArgs),
    /// Formation-game equilibria.
    #[command(subcommand)]
    Game(GameCommand),
    /// Clique-size and cone-size bounds for given edge costs.
    Bounds(BoundsArgs),
    /// Mean-field curves.
    #[command(subcommand)]
    Theory(TheoryCommand),
    /// Edge costs implied by a topology's edge counts.
    EstimatePhis(EstimateArgs),
    /// Bounds against measured values for a directory of snapshots.
    Timeseries(TimeseriesArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RuleArg {
    /// Σ l < Q · min l
    Sum,
    /// Q · Σ l < min l
    Literal,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    /// Clique-size control; required unless --calibrate is given.
    #[arg(long, required_unless_present = "calibrate")]
    pub q: Option<f64>,
    /// Choose q so the tier-1 clique has this many members.
    #[arg(long, conflicts_with = "q")]
    pub calibrate: Option<usize>,
    #[arg(long, default_value_t = 0.55)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.7)]
    pub beta: f64,
    #[arg(long, default_value_t = 18.5)]
    pub radius: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "sum")]
    pub rule: RuleArg,
    /// Graph file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// CSV of polar coordinates (id,r,phi).
    #[arg(long)]
    pub coords: Option<PathBuf>,
    /// Tier-1 clique members, one id per line.
    #[arg(long)]
    pub clique: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Relationship file (`A|B|-1` customer B of provider A, `A|B|0` peers).
    pub graph: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DistanceArg {
    Auto,
    Exact,
    Sampled,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub degree_ccdf: Option<PathBuf>,
    #[arg(long)]
    pub cone_ccdf: Option<PathBuf>,
    /// `auto` is exact up to 50000 nodes and sampled above.
    #[arg(long, value_enum, default_value = "auto")]
    pub distances: DistanceArg,
    #[arg(long, default_value_t = 1000)]
    pub sources: usize,
    /// Required whenever distances are sampled.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OverlapArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 500_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PeeringArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GameCommand {
    /// All pairwise-stable states for n ≤ 4 players.
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub phi_p: f64,
    #[arg(long)]
    pub phi_r: f64,
    /// Also treat customer-provider additions as bilateral deviations.
    #[arg(long)]
    pub cp_additions: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub phi_p: f64,
    #[arg(long)]
    pub phi_r: f64,
    /// With --clique-size, also report the cone-size bound.
    #[arg(long, requires = "clique_size")]
    pub n: Option<usize>,
    #[arg(long, requires = "n")]
    pub clique_size: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum TheoryCommand {
    /// Expected cone size T̄(r) on [0, R] (CSV: r,cone).
    ConeProfile(ProfileArgs),
    /// Peering probability by radius (CSV: r2,exact,approx).
    Peering(TheoryPeeringArgs),
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long, default_value_t = 18.5)]
    pub radius: f64,
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct TheoryPeeringArgs {
    #[arg(long, default_value_t = 18.5)]
    pub radius: f64,
    /// Number of evenly spaced r2 values on (0, R].
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1.1)]
    pub c1: f64,
    #[arg(long, default_value_t = 0.05)]
    pub c2: f64,
}

#[derive(Debug, Args)]
pub struct TimeseriesArgs {
    /// Directory of relationship files, processed in file-name order.
    #[arg(long)]
    pub snapshots: PathBuf,
    #[arg(long, default_value_t = 1.1)]
    pub c1: f64,
    #[arg(long, default_value_t = 0.05)]
    pub c2: f64,
}
