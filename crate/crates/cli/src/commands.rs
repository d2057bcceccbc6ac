use std::io::Write;
use std::path::Path;

use astopo::game::{
    clique_size_bound, cone_size_bound, contains_spanning_spider, enumerate_equilibria_with, GameParams,
    StabilityOptions,
};
use astopo::io::{read_graph_file, write_graph, Asn, SnapshotMeta};
use astopo::metrics::{
    basic_metrics, cone_ccdf, degree_ccdf, overlap_ccdf, peering_likelihood, BinnedCurve, DistanceMode,
    MetricsOptions, MetricsReport,
};
use astopo::spider::{spider_coverage, verify_spider, SpiderReport};
use astopo::theory::{bound_timeseries, estimate_phis, peering_prob, solve_cone_profile, BoundRow};
use astopo::yeas::{build, calibrate_q, CliqueRule, Layout, YeasOptions, YeasParams};
use astopo::LabeledAsGraph;
use serde::Serialize;

use crate::args::*;
use crate::output::{cell, create, print_json, write_csv, write_curve};
use crate::CliError;

pub fn run(cli: Cli, invocation: &str) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => generate(a, invocation),
        Command::Metrics(a) => metrics(a, invocation),
        Command::Spider(a) => spider(a, invocation),
        Command::Overlap(a) => overlap(a, invocation),
        Command::Peering(a) => peering(a, invocation),
        Command::Game(GameCommand::Enumerate(a)) => game_enumerate(a, invocation),
        Command::Bounds(a) => bounds(a, invocation),
        Command::Theory(TheoryCommand::ConeProfile(a)) => cone_profile(a, invocation),
        Command::Theory(TheoryCommand::Peering(a)) => theory_peering(a, invocation),
        Command::EstimatePhis(a) => estimate(a, invocation),
        Command::Timeseries(a) => timeseries(a, invocation),
    }
}

fn load(path: &Path) -> Result<(LabeledAsGraph, SnapshotMeta), CliError> {
    read_graph_file(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn asns(meta: &SnapshotMeta, ids: &[astopo::NodeId]) -> Vec<Asn> {
    ids.iter().map(|&u| meta.asn(u)).collect()
}

#[derive(Serialize)]
struct GenerateOutput<'a> {
    command: &'static str,
    invocation: &'a str,
    n: usize,
    q: f64,
    alpha: f64,
    beta: f64,
    radius: f64,
    seed: u64,
    rule: &'static str,
    edges: usize,
    peer_edges: usize,
    cp_edges: usize,
    tier1_size: usize,
}

fn generate(a: GenerateArgs, invocation: &str) -> Result<(), CliError> {
    let rule = match a.rule {
        RuleArg::Sum => CliqueRule::SumBelowScaledMin,
        RuleArg::Literal => CliqueRule::Literal,
    };
    let mut params =
        YeasParams { n: a.n, q: a.q.unwrap_or(1.0), alpha: a.alpha, beta: a.beta, radius: a.radius, seed: a.seed };
    params.validate()?;
    let layout = Layout::sample(&params)?;
    if let Some(target) = a.calibrate {
        params.q = calibrate_q(&layout, target, rule)?;
    }
    let out = build(&layout, &params, YeasOptions { rule, ..Default::default() });
    let rule_name = match a.rule {
        RuleArg::Sum => "sum",
        RuleArg::Literal => "literal",
    };
    let comments = vec![
        format!("# {invocation}"),
        format!(
            "# generator=yeas n={} q={} alpha={} beta={} radius={} seed={} rule={rule_name}",
            params.n, params.q, params.alpha, params.beta, params.radius, params.seed
        ),
    ];
    let meta = SnapshotMeta::identity(params.n, comments);
    write_graph(&out.graph, &meta, create(&a.out)?)?;
    if let Some(path) = &a.coords {
        let rows = out.coords.iter().enumerate().map(|(i, p)| vec![cell(i), cell(p.r), cell(p.phi)]);
        write_csv(create(path)?, invocation, &["id", "r", "phi"], rows)?;
    }
    if let Some(path) = &a.clique {
        let mut w = create(path)?;
        writeln!(w, "# {invocation}")?;
        for u in &out.clique {
            writeln!(w, "{u}")?;
        }
        w.flush()?;
    }
    print_json(&GenerateOutput {
        command: "generate",
        invocation,
        n: params.n,
        q: params.q,
        alpha: params.alpha,
        beta: params.beta,
        radius: params.radius,
        seed: params.seed,
        rule: rule_name,
        edges: out.graph.edge_count(),
        peer_edges: out.graph.peer_edges().len(),
        cp_edges: out.graph.cp_edges().len(),
        tier1_size: out.clique.len(),
    })
}

#[derive(Serialize)]
struct MetricsOutput<'a> {
    command: &'static str,
    invocation: &'a str,
    #[serde(flatten)]
    report: MetricsReport,
    tier1_asns: Vec<Asn>,
}

fn metrics(a: MetricsArgs, invocation: &str) -> Result<(), CliError> {
    let mut opts = MetricsOptions {
        distances: match a.distances {
            DistanceArg::Auto => DistanceMode::Auto,
            DistanceArg::Exact => DistanceMode::Exact,
            DistanceArg::Sampled => DistanceMode::Sampled,
        },
        sample_sources: a.sources,
        ..Default::default()
    };
    let (g, meta) = load(&a.graph)?;
    if opts.uses_sampling(g.node_count()) {
        opts.seed = a.seed.ok_or_else(|| {
            CliError::Usage("distances will be sampled on this graph; pass --seed".to_string())
        })?;
    }
    let report = basic_metrics(&g, &opts);
    if let Some(path) = &a.degree_ccdf {
        write_curve(path, invocation, &degree_ccdf(&g))?;
    }
    if let Some(path) = &a.cone_ccdf {
        write_curve(path, invocation, &cone_ccdf(&g))?;
    }
    let tier1_asns = asns(&meta, &astopo::top_clique(&g));
    print_json(&MetricsOutput { command: "metrics", invocation, report, tier1_asns })
}

#[derive(Serialize)]
struct SpiderOutput<'a> {
    command: &'static str,
    invocation: &'a str,
    #[serde(flatten)]
    report: SpiderReport,
    clique_asns: Vec<Asn>,
    coverage: f64,
}

fn spider(a: GraphArg, invocation: &str) -> Result<(), CliError> {
    let (g, meta) = load(&a.graph)?;
    let coverage = spider_coverage(&g)?;
    let report = verify_spider(&g);
    let clique_asns = asns(&meta, &report.clique_nodes);
    print_json(&SpiderOutput { command: "spider", invocation, report, clique_asns, coverage })
}

#[derive(Serialize)]
struct CurveOutput<'a> {
    command: &'static str,
    invocation: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    zero_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    curve: BinnedCurve,
}

fn overlap(a: OverlapArgs, invocation: &str) -> Result<(), CliError> {
    let (g, _) = load(&a.graph)?;
    let r = overlap_ccdf(&g, a.samples, a.seed)?;
    if let Some(path) = &a.csv {
        write_curve(path, invocation, &r.curve)?;
    }
    print_json(&CurveOutput {
        command: "overlap",
        invocation,
        zero_fraction: Some(r.zero_fraction),
        samples: Some(r.samples),
        seed: Some(a.seed),
        curve: r.curve,
    })
}

fn peering(a: PeeringArgs, invocation: &str) -> Result<(), CliError> {
    let (g, _) = load(&a.graph)?;
    let curve = peering_likelihood(&g, &g.cone_sizes());
    if let Some(path) = &a.csv {
        write_curve(path, invocation, &curve)?;
    }
    print_json(&CurveOutput { command: "peering", invocation, zero_fraction: None, samples: None, seed: None, curve })
}

#[derive(Serialize)]
struct EdgeLists {
    peer: Vec<(u32, u32)>,
    /// (customer, provider)
    cp: Vec<(u32, u32)>,
}

#[derive(Serialize)]
struct EquilibriumOut {
    profile: String,
    graph: EdgeLists,
    is_spider: bool,
    contains_spanning_spider: bool,
}

#[derive(Serialize)]
struct GameOutput<'a> {
    command: &'static str,
    invocation: &'a str,
    n: usize,
    phi_p: f64,
    phi_r: f64,
    cp_additions: bool,
    count: usize,
    equilibria: Vec<EquilibriumOut>,
}

fn game_enumerate(a: EnumerateArgs, invocation: &str) -> Result<(), CliError> {
    let params = GameParams::new(a.phi_p, a.phi_r)?;
    let opts = StabilityOptions { cp_additions: a.cp_additions };
    let eqs = enumerate_equilibria_with(a.n, params, opts)?;
    let equilibria = eqs
        .iter()
        .map(|e| {
            Ok(EquilibriumOut {
                profile: e.profile.to_string(),
                graph: EdgeLists { peer: e.graph.peer_edges().to_vec(), cp: e.graph.cp_edges().to_vec() },
                is_spider: verify_spider(&e.graph).is_spider,
                contains_spanning_spider: contains_spanning_spider(&e.graph)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    print_json(&GameOutput {
        command: "game-enumerate",
        invocation,
        n: a.n,
        phi_p: a.phi_p,
        phi_r: a.phi_r,
        cp_additions: a.cp_additions,
        count: equilibria.len(),
        equilibria,
    })
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    command: &'static str,
    invocation: &'a str,
    phi_p: f64,
    phi_r: f64,
    clique_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    cone_bound: Option<f64>,
}

fn bounds(a: BoundsArgs, invocation: &str) -> Result<(), CliError> {
    let params = GameParams::new(a.phi_p, a.phi_r)?;
    let clique_bound = clique_size_bound(params)?;
    let cone_bound = match (a.n, a.clique_size) {
        (Some(n), Some(k)) => Some(cone_size_bound(n, k, params)?),
        _ => None,
    };
    print_json(&BoundsOutput { command: "bounds", invocation, phi_p: a.phi_p, phi_r: a.phi_r, clique_bound, cone_bound })
}

fn cone_profile(a: ProfileArgs, invocation: &str) -> Result<(), CliError> {
    let p = solve_cone_profile(a.radius, a.grid)?;
    let rows = p.grid.iter().zip(&p.values).map(|(r, t)| vec![cell(r), cell(t)]);
    write_csv(std::io::stdout().lock(), invocation, &["r", "cone"], rows)
}

fn theory_peering(a: TheoryPeeringArgs, invocation: &str) -> Result<(), CliError> {
    if a.grid == 0 {
        return Err(CliError::Usage("--grid must be positive".to_string()));
    }
    let mut rows = Vec::with_capacity(a.grid);
    for i in 1..=a.grid {
        let r2 = a.radius * i as f64 / a.grid as f64;
        let p = peering_prob(r2, a.radius)?;
        rows.push(vec![cell(r2), cell(p.exact), cell(p.approx)]);
    }
    write_csv(std::io::stdout().lock(), invocation, &["r2", "exact", "approx"], rows)
}

#[derive(Serialize)]
struct EstimateOutput<'a> {
    command: &'static str,
    invocation: &'a str,
    nodes: usize,
    peer_edges: usize,
    cp_edges: usize,
    c1: f64,
    c2: f64,
    phi_p: f64,
    phi_r: f64,
}

fn estimate(a: EstimateArgs, invocation: &str) -> Result<(), CliError> {
    let (g, _) = load(&a.graph)?;
    let p = estimate_phis(&g, a.c1, a.c2)?;
    print_json(&EstimateOutput {
        command: "estimate-phis",
        invocation,
        nodes: g.node_count(),
        peer_edges: g.peer_edges().len(),
        cp_edges: g.cp_edges().len(),
        c1: a.c1,
        c2: a.c2,
        phi_p: p.phi_p,
        phi_r: p.phi_r,
    })
}

fn timeseries(a: TimeseriesArgs, invocation: &str) -> Result<(), CliError> {
    let dir = std::fs::read_dir(&a.snapshots)
        .map_err(|e| CliError::Data(format!("{}: {e}", a.snapshots.display())))?;
    let mut paths = Vec::new();
    for entry in dir {
        let path = entry?.path();
        let hidden = path.file_name().and_then(|s| s.to_str()).is_some_and(|s| s.starts_with('.'));
        if path.is_file() && !hidden {
            paths.push(path);
        }
    }
    paths.sort();
    let mut snapshots = Vec::with_capacity(paths.len());
    for path in &paths {
        let label = path.file_name().unwrap().to_string_lossy().into_owned();
        snapshots.push((label, load(path)?.0));
    }
    let rows: Vec<BoundRow> = bound_timeseries(&snapshots, a.c1, a.c2)?;
    let header = [
        "label",
        "nodes",
        "peer_edges",
        "cp_edges",
        "phi_p",
        "phi_r",
        "clique_bound",
        "tier1_size",
        "cone_bound",
        "max_tier1_cone",
        "max_cone",
    ];
    let rows = rows.into_iter().map(|r| {
        vec![
            r.label,
            cell(r.nodes),
            cell(r.peer_edges),
            cell(r.cp_edges),
            cell(r.phi_p),
            cell(r.phi_r),
            cell(r.clique_bound),
            cell(r.tier1_size),
            cell(r.cone_bound),
            cell(r.max_tier1_cone),
            cell(r.max_cone),
        ]
    });
    write_csv(std::io::stdout().lock(), invocation, &header, rows)
}
