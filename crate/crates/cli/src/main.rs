//! `biclique` — exact (p,q)-biclique counting from the command line.
//!
//! Exit codes: 0 success, 2 argument errors (including cost-index/graph
//! mismatches), 3 input or parse errors, 4 resource-cap errors.

mod report;

use biclique_core::{
    build_cost_index, core_order, load_graph, local_count_with, pq_core_reduce, range_count_with,
    top_level_count_with, top_level_count_with_index, write_plain_edge_list, BigCount,
    BipartiteGraph, CostIndex, EdgeListFormat, Error as CoreError, LoadedGraph, SearchMetrics,
    SearchOptions, SizeRange, Strategy,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use report::*;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "biclique",
    version,
    about = "Exact (p,q)-biclique counting on bipartite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count (p,q)-bicliques in the whole graph
    Count(CountArgs),
    /// Count per-node (p,q)-biclique participation
    Local(LocalArgs),
    /// Count all (p,q)-bicliques for a rectangle of sizes in one pass
    Range(RangeArgs),
    /// Build a split-decision index and write it to a file
    Index(IndexArgs),
    /// Print graph statistics
    Stats(StatsArgs),
    /// Reduce a graph to its (p,q)-core and write it out
    Reduce(ReduceArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Edge-list file, or "-" for stdin
    #[arg(long)]
    input: String,
    /// Input dialect
    #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
}

#[derive(Args)]
struct OutputModeArgs {
    /// Emit a JSON report (the default)
    #[arg(long)]
    json: bool,
    /// Emit plain text; for `count`, the number alone
    #[arg(long, conflicts_with = "json")]
    plain: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Plain,
    Konect,
}

impl FormatArg {
    fn to_core(self) -> EdgeListFormat {
        match self {
            FormatArg::Plain => EdgeListFormat::Plain,
            FormatArg::Konect => EdgeListFormat::Konect,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FormatArg::Plain => "plain",
            FormatArg::Konect => "konect",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    NodeSplit,
    EdgeSplit,
    Estimator,
    EstimatorIndex,
}

impl StrategyArg {
    fn to_core(self) -> Strategy {
        match self {
            StrategyArg::NodeSplit => Strategy::NodeSplit,
            StrategyArg::EdgeSplit => Strategy::EdgeSplit,
            StrategyArg::Estimator => Strategy::Estimator,
            StrategyArg::EstimatorIndex => Strategy::EstimatorIndex,
        }
    }
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Estimator)]
    strategy: StrategyArg,
    /// Worker threads; the counts are identical for any value
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Use a prebuilt split-decision index (overrides --strategy)
    #[arg(long)]
    index: Option<String>,
    #[command(flatten)]
    output: OutputModeArgs,
}

#[derive(Args)]
struct LocalArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Estimator)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Report only the K highest-count nodes per side
    #[arg(long)]
    top: Option<usize>,
    #[command(flatten)]
    output: OutputModeArgs,
}

#[derive(Args)]
struct RangeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    p_min: u64,
    #[arg(long)]
    p_max: u64,
    #[arg(long)]
    q_min: u64,
    #[arg(long)]
    q_max: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Estimator)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    output: OutputModeArgs,
}

#[derive(Args)]
struct IndexArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    x: u64,
    #[arg(long)]
    y: u64,
    /// Destination file for the JSON index
    #[arg(long)]
    out: String,
    #[command(flatten)]
    output: OutputModeArgs,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputModeArgs,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    /// Destination file for the reduced plain edge list
    #[arg(long)]
    out: String,
    #[command(flatten)]
    output: OutputModeArgs,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::InvalidArgument(_) => 2,
            CoreError::Parse { .. } | CoreError::EmptyInput | CoreError::Io(_) => 3,
            CoreError::DepthLimitExceeded(_) | CoreError::OracleBudgetExceeded(_) => 4,
        };
        CliError::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Local(args) => cmd_local(args),
        Command::Range(args) => cmd_range(args),
        Command::Index(args) => cmd_index(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Reduce(args) => cmd_reduce(args),
    }
}

fn load_input(args: &InputArgs) -> Result<LoadedGraph, CliError> {
    let format = args.format.to_core();
    if args.input == "-" {
        let stdin = std::io::stdin();
        Ok(load_graph(stdin.lock(), format)?)
    } else {
        let file = File::open(&args.input)
            .map_err(|e| CliError::new(3, format!("cannot open {}: {e}", args.input)))?;
        Ok(load_graph(BufReader::new(file), format)?)
    }
}

fn search_options(threads: usize) -> Result<SearchOptions, CliError> {
    let max_depth = match std::env::var("BICLIQUE_MAX_DEPTH") {
        Ok(text) => Some(text.parse::<usize>().map_err(|_| {
            CliError::new(2, format!("BICLIQUE_MAX_DEPTH must be an integer, got {text:?}"))
        })?),
        Err(_) => None,
    };
    Ok(SearchOptions { threads, max_depth })
}

fn emit_json<T: serde::Serialize>(report: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::new(3, format!("report serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn cmd_count(args: CountArgs) -> Result<(), CliError> {
    let loaded = load_input(&args.input)?;
    let g = &loaded.graph;
    let rank = core_order(g);
    let opts = search_options(args.threads)?;

    let mut index_file = None;
    let mut index_load_ms = None;
    let strategy_name;
    let started;
    let (count, metrics): (BigCount, SearchMetrics) = if let Some(path) = &args.index {
        let t = Instant::now();
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::new(3, format!("cannot read index {path}: {e}")))?;
        let index = CostIndex::from_json(&text)?;
        if !index.matches_graph(g) {
            return Err(CliError::new(
                2,
                format!("index {path} was built for a different graph (hash mismatch)"),
            ));
        }
        index_load_ms = Some(t.elapsed().as_secs_f64() * 1e3);
        index_file = Some(path.clone());
        strategy_name = "estimator-index".to_string();
        // Timing starts after the index is ready.
        started = Instant::now();
        top_level_count_with_index(g, &rank, args.p, args.q, &index, &opts)?
    } else {
        let strategy = args.strategy.to_core();
        strategy_name = strategy.name().to_string();
        started = Instant::now();
        top_level_count_with(g, &rank, args.p, args.q, strategy, &opts)?
    };
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    if args.output.plain {
        println!("{count}");
        return Ok(());
    }
    emit_json(&CountReport {
        command: "count".into(),
        input: args.input.input.clone(),
        format: args.input.format.name().into(),
        graph: StatsJson::from_stats(&g.stats()),
        duplicates_dropped: loaded.duplicates_dropped,
        p: args.p,
        q: args.q,
        strategy: strategy_name,
        threads: args.threads,
        count: count.to_string(),
        metrics: MetricsJson::from_metrics(&metrics),
        wall_ms,
        index_file,
        index_load_ms,
    })
}

fn cmd_local(args: LocalArgs) -> Result<(), CliError> {
    let loaded = load_input(&args.input)?;
    let g = &loaded.graph;
    let rank = core_order(g);
    let opts = search_options(args.threads)?;
    let strategy = args.strategy.to_core();

    let started = Instant::now();
    let (lc, metrics) = local_count_with(g, &rank, args.p, args.q, strategy, &opts)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let sum_u = lc.sum_u();
    let sum_v = lc.sum_v();
    let total = exact_total(&sum_u, args.p);
    let identities_ok =
        sum_u == &total * args.p && sum_v == &total * args.q && lc.u.iter().all(|c| *c <= total);

    let collect = |counts: &[BigCount], ids: &[u64]| -> Vec<NodeCountJson> {
        let mut entries: Vec<(u64, BigCount)> = ids
            .iter()
            .zip(counts)
            .map(|(&id, c)| (id, c.clone()))
            .collect();
        if let Some(k) = args.top {
            entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            entries.truncate(k);
        }
        entries
            .into_iter()
            .map(|(id, count)| NodeCountJson {
                id,
                count: count.to_string(),
            })
            .collect()
    };
    let u_counts = collect(&lc.u, &loaded.u_ids);
    let v_counts = collect(&lc.v, &loaded.v_ids);

    if args.output.plain {
        for e in &u_counts {
            println!("u {} {}", e.id, e.count);
        }
        for e in &v_counts {
            println!("v {} {}", e.id, e.count);
        }
        println!(
            "# sum_u={sum_u} sum_v={sum_v} total={total} identities={}",
            if identities_ok { "ok" } else { "VIOLATED" }
        );
        return Ok(());
    }
    emit_json(&LocalReport {
        command: "local".into(),
        input: args.input.input.clone(),
        format: args.input.format.name().into(),
        graph: StatsJson::from_stats(&g.stats()),
        duplicates_dropped: loaded.duplicates_dropped,
        p: args.p,
        q: args.q,
        strategy: strategy.name().into(),
        threads: args.threads,
        total: total.to_string(),
        sum_u: sum_u.to_string(),
        sum_v: sum_v.to_string(),
        identities_ok,
        top: args.top,
        u_counts,
        v_counts,
        metrics: MetricsJson::from_metrics(&metrics),
        wall_ms,
    })
}

fn cmd_range(args: RangeArgs) -> Result<(), CliError> {
    let loaded = load_input(&args.input)?;
    let g = &loaded.graph;
    let rank = core_order(g);
    let opts = search_options(args.threads)?;
    let strategy = args.strategy.to_core();
    let range = SizeRange::new(args.p_min, args.p_max, args.q_min, args.q_max)?;

    let started = Instant::now();
    let (matrix, metrics) = range_count_with(g, &rank, range, strategy, &opts)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let cells: Vec<Vec<String>> = matrix
        .rows()
        .map(|(_, row)| row.iter().map(|c| c.to_string()).collect())
        .collect();

    if args.output.plain {
        for (p, row) in matrix.rows() {
            let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            println!("p={p}\t{}", line.join("\t"));
        }
        return Ok(());
    }
    emit_json(&RangeReport {
        command: "range".into(),
        input: args.input.input.clone(),
        format: args.input.format.name().into(),
        graph: StatsJson::from_stats(&g.stats()),
        duplicates_dropped: loaded.duplicates_dropped,
        p_min: args.p_min,
        p_max: args.p_max,
        q_min: args.q_min,
        q_max: args.q_max,
        strategy: strategy.name().into(),
        threads: args.threads,
        cells,
        metrics: MetricsJson::from_metrics(&metrics),
        wall_ms,
    })
}

fn cmd_index(args: IndexArgs) -> Result<(), CliError> {
    if args.x < 1 || args.y < 1 {
        return Err(CliError::new(2, "x and y must be positive"));
    }
    let loaded = load_input(&args.input)?;
    let g = &loaded.graph;
    let rank = core_order(g);

    let started = Instant::now();
    let index = build_cost_index(g, &rank, args.x, args.y);
    let build_ms = started.elapsed().as_secs_f64() * 1e3;

    std::fs::write(&args.out, index.to_json())
        .map_err(|e| CliError::new(3, format!("cannot write {}: {e}", args.out)))?;

    let edge_split_nodes = index.edge_split_bits().iter().filter(|&&b| b).count();
    let report = IndexReport {
        command: "index".into(),
        input: args.input.input.clone(),
        format: args.input.format.name().into(),
        x: args.x,
        y: args.y,
        u_count: index.len(),
        node_split_nodes: index.len() - edge_split_nodes,
        edge_split_nodes,
        graph_sha256: index.graph_digest.clone(),
        out: args.out.clone(),
        build_ms,
    };
    if args.output.plain {
        println!(
            "index {} nodes ({} node-split, {} edge-split) -> {}",
            report.u_count, report.node_split_nodes, report.edge_split_nodes, report.out
        );
        return Ok(());
    }
    emit_json(&report)
}

fn cmd_stats(args: StatsArgs) -> Result<(), CliError> {
    let loaded = load_input(&args.input)?;
    let stats = loaded.graph.stats();
    if args.output.plain {
        println!("u_count {}", stats.u_count);
        println!("v_count {}", stats.v_count);
        println!("edge_count {}", stats.edge_count);
        println!("max_degree_u {}", stats.max_degree_u);
        println!("max_degree_v {}", stats.max_degree_v);
        println!("avg_degree_u {}", stats.avg_degree_u);
        println!("avg_degree_v {}", stats.avg_degree_v);
        println!("duplicates_dropped {}", loaded.duplicates_dropped);
        return Ok(());
    }
    emit_json(&StatsReport {
        command: "stats".into(),
        input: args.input.input.clone(),
        format: args.input.format.name().into(),
        graph: StatsJson::from_stats(&stats),
        duplicates_dropped: loaded.duplicates_dropped,
    })
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), CliError> {
    if args.p < 1 || args.q < 1 {
        return Err(CliError::new(2, "p and q must be positive"));
    }
    let loaded = load_input(&args.input)?;
    let g = &loaded.graph;
    let (reduced, maps) = pq_core_reduce(g, args.p, args.q);

    write_edge_list_file(&reduced, Path::new(&args.out))?;
    let report = ReduceReport {
        command: "reduce".into(),
        input: args.input.input.clone(),
        format: args.input.format.name().into(),
        p: args.p,
        q: args.q,
        original: StatsJson::from_stats(&g.stats()),
        reduced: StatsJson::from_stats(&reduced.stats()),
        removed_u: g.u_count() - maps.u_map.len(),
        removed_v: g.v_count() - maps.v_map.len(),
        out: args.out.clone(),
    };
    if args.output.plain {
        println!(
            "reduced {}x{} ({} edges) -> {}x{} ({} edges) at ({},{}), wrote {}",
            report.original.u_count,
            report.original.v_count,
            report.original.edge_count,
            report.reduced.u_count,
            report.reduced.v_count,
            report.reduced.edge_count,
            args.p,
            args.q,
            report.out
        );
        return Ok(());
    }
    emit_json(&report)
}

fn write_edge_list_file(g: &BipartiteGraph, path: &Path) -> Result<(), CliError> {
    let mut file = File::create(path)
        .map_err(|e| CliError::new(3, format!("cannot create {}: {e}", path.display())))?;
    write_plain_edge_list(g, &mut file)
        .and_then(|()| file.flush())
        .map_err(|e| CliError::new(3, format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}
