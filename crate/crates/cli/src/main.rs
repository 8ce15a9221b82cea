//! `hyperrec` — hypergraph reconstruction toolkit.
//!
//! Every command is deterministic given its flags and `--seed`; the seed is
//! fanned into labeled sub-streams (splitting, negative sampling, weight
//! initialization, sub-clique sampling) so stages are independently
//! reproducible. The `HYPERREC_THREADS` environment variable caps internal
//! parallelism.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperrec_core::classifier::{self, TrainConfig};
use hyperrec_core::error::{Error, Result};
use hyperrec_core::features::write_feature_dump;
use hyperrec_core::hypergraph::{split_hyperedges, SplitMode, SplitSpec};
use hyperrec_core::io::{self, LoadOptions};
use hyperrec_core::metrics::{jaccard, multi_jaccard, property_report};
use hyperrec_core::search::{reconstruct, SearchConfig};
use hyperrec_core::synth::{generate_synthetic, SynthConfig};
use hyperrec_core::{baselines, ProjectedGraph};

#[derive(Parser)]
#[command(
    name = "hyperrec",
    version,
    about = "Reconstruct hypergraphs from weighted projected graphs",
    after_help = "Exit codes: 0 success, 1 validation error, 2 i/o error.\n\
                  HYPERREC_THREADS caps internal parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a hypergraph file to its weighted graph (clique expansion)
    Project(ProjectArgs),
    /// Split a hypergraph's instances into source and target halves
    Split(SplitArgs),
    /// Train the clique scorer on a source graph/hypergraph pair
    Train(TrainArgs),
    /// Reconstruct a hypergraph from a projected graph
    Reconstruct(ReconstructArgs),
    /// Compare a reconstruction against a ground-truth hypergraph
    Evaluate(EvaluateArgs),
    /// Print summary statistics of a hypergraph or graph file
    Stats(StatsArgs),
    /// Generate a synthetic hypergraph
    Synth(SynthArgs),
}

#[derive(Args)]
struct ProjectArgs {
    /// Input hypergraph file
    #[arg(long, short = 'i')]
    input: PathBuf,
    /// Output graph file ("u v w" lines); an id-map sidecar is written next to it
    #[arg(long, short = 'o')]
    output: PathBuf,
    /// Skip hyperedges with fewer than 2 distinct nodes instead of failing
    #[arg(long)]
    skip_invalid: bool,
}

#[derive(Args)]
struct SplitArgs {
    /// Input hypergraph file
    #[arg(long, short = 'i')]
    input: PathBuf,
    /// Split mode; timestamp mode requires @t= on every instance
    #[arg(long, value_enum, default_value_t = SplitModeArg::Random)]
    mode: SplitModeArg,
    /// Seed for the random split
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file for the source half
    #[arg(long)]
    out_source: PathBuf,
    /// Output file for the target half
    #[arg(long)]
    out_target: PathBuf,
    /// Skip hyperedges with fewer than 2 distinct nodes instead of failing
    #[arg(long)]
    skip_invalid: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SplitModeArg {
    Random,
    Timestamp,
}

#[derive(Args)]
struct TrainArgs {
    /// Source projected-graph file; must equal the hypergraph's projection
    #[arg(long)]
    graph: PathBuf,
    /// Source hypergraph file
    #[arg(long)]
    hypergraph: PathBuf,
    /// Output model file (JSON)
    #[arg(long, short = 'o')]
    out: PathBuf,
    /// Hidden layer width
    #[arg(long, default_value_t = 64)]
    hidden_size: usize,
    /// Adam learning rate
    #[arg(long, default_value_t = 1e-3)]
    learning_rate: f64,
    /// Training epochs
    #[arg(long, default_value_t = 100)]
    epochs: usize,
    /// Mini-batch size
    #[arg(long, default_value_t = 128)]
    batch_size: usize,
    /// Negatives sampled per positive
    #[arg(long, default_value_t = 5.0)]
    negative_ratio: f64,
    /// Seed driving sampling, shuffling, and initialization
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the labeled training features as TSV
    #[arg(long)]
    dump_features: Option<PathBuf>,
    /// Skip hyperedges with fewer than 2 distinct nodes instead of failing
    #[arg(long)]
    skip_invalid: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Filtering plus model-guided bidirectional search
    Marioh,
    /// Every maximal clique as a hyperedge
    Maxclique,
    /// Greedy edge clique cover
    Cover,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Input projected-graph file
    #[arg(long)]
    graph: PathBuf,
    /// Trained model file (required for --method marioh)
    #[arg(long)]
    model: Option<PathBuf>,
    /// Output hypergraph file
    #[arg(long, short = 'o')]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Marioh)]
    method: Method,
    /// Initial classification threshold, in (0, 1]
    #[arg(long, default_value_t = 0.9)]
    theta_init: f64,
    /// Share (%) of below-threshold cliques whose sub-cliques are explored
    #[arg(long = "r", default_value_t = 10.0)]
    r_percent: f64,
    /// Per-iteration threshold decay as a fraction of theta-init
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Iteration cap; 0 means 10 * ceil(1 / alpha)
    #[arg(long, default_value_t = 0)]
    max_iterations: usize,
    /// Fail instead of sweeping up leftovers at threshold 0 after the cap
    #[arg(long)]
    no_fallback: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the per-iteration trace table to this file
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EvalMode {
    /// Force every multiplicity to 1 on both sides before comparing
    Reduced,
    /// Keep multiplicities
    Preserved,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Ground-truth hypergraph file
    #[arg(long)]
    truth: PathBuf,
    /// Reconstructed hypergraph file
    #[arg(long)]
    recon: PathBuf,
    #[arg(long, value_enum, default_value_t = EvalMode::Preserved)]
    mode: EvalMode,
    /// Skip hyperedges with fewer than 2 distinct nodes instead of failing
    #[arg(long)]
    skip_invalid: bool,
}

#[derive(Args)]
struct StatsArgs {
    /// Hypergraph file to summarize
    #[arg(long, conflicts_with = "graph")]
    hypergraph: Option<PathBuf>,
    /// Projected-graph file to summarize
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Skip hyperedges with fewer than 2 distinct nodes instead of failing
    #[arg(long)]
    skip_invalid: bool,
}

#[derive(Args)]
struct SynthArgs {
    /// Number of nodes
    #[arg(long)]
    nodes: usize,
    /// Number of hyperedge instances
    #[arg(long)]
    hyperedges: usize,
    /// Smallest hyperedge size
    #[arg(long, default_value_t = 2)]
    min_size: usize,
    /// Largest hyperedge size
    #[arg(long, default_value_t = 5)]
    max_size: usize,
    /// Probability of duplicating an earlier instance
    #[arg(long, default_value_t = 0.1)]
    duplicate_prob: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output hypergraph file
    #[arg(long, short = 'o')]
    out: PathBuf,
}

fn main() -> ExitCode {
    // die quietly when a pipe downstream closes early (e.g. `stats | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Project(args) => cmd_project(args),
        Command::Split(args) => cmd_split(args),
        Command::Train(args) => cmd_train(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Synth(args) => cmd_synth(args),
    }
}

fn load_options(skip_invalid: bool) -> LoadOptions {
    LoadOptions { skip_invalid }
}

fn print_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn ids_sidecar(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".ids");
    PathBuf::from(os)
}

fn cmd_project(args: ProjectArgs) -> Result<()> {
    let loaded = io::load_hypergraph(&args.input, load_options(args.skip_invalid))?;
    print_warnings(&loaded.warnings);
    if loaded.hypergraph.is_empty() {
        eprintln!(
            "warning: {} contains no hyperedges; writing an empty graph",
            args.input.display()
        );
    }
    let graph = loaded.hypergraph.clique_expansion();
    io::save_graph(&args.output, &graph, Some(&loaded.id_map))?;
    io::save_id_map(ids_sidecar(&args.output), &loaded.id_map)?;
    println!(
        "edges={} total-weight={}",
        graph.edge_count(),
        graph.total_weight()
    );
    Ok(())
}

fn cmd_split(args: SplitArgs) -> Result<()> {
    let loaded = io::load_hypergraph(&args.input, load_options(args.skip_invalid))?;
    print_warnings(&loaded.warnings);
    let spec = match args.mode {
        SplitModeArg::Random => SplitSpec::random(args.seed),
        SplitModeArg::Timestamp => SplitSpec {
            mode: SplitMode::TimestampHalves,
            seed: args.seed,
            timestamps: loaded.timestamps.clone(),
        },
    };
    let (source, target) = split_hyperedges(&loaded.hypergraph, &spec)?;
    io::save_hypergraph(&args.out_source, &source, Some(&loaded.id_map))?;
    io::save_hypergraph(&args.out_target, &target, Some(&loaded.id_map))?;
    println!(
        "source-instances={} target-instances={}",
        source.instance_count(),
        target.instance_count()
    );
    Ok(())
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let loaded = io::load_hypergraph(&args.hypergraph, load_options(args.skip_invalid))?;
    print_warnings(&loaded.warnings);
    let graph = io::load_graph_with(&args.graph, &loaded.id_map)?;
    let cfg = TrainConfig {
        hidden_size: args.hidden_size,
        learning_rate: args.learning_rate,
        epochs: args.epochs,
        batch_size: args.batch_size,
        negative_ratio: args.negative_ratio,
        seed: args.seed,
    };
    let examples = classifier::build_training_set(&graph, &loaded.hypergraph, &cfg)?;
    if let Some(dump) = &args.dump_features {
        let rows: Vec<_> = examples.iter().map(|e| (e.features, e.label)).collect();
        write_feature_dump(dump, &rows)?;
    }
    let model = classifier::train(&examples, &cfg)?;
    classifier::save_model(&args.out, &model)?;
    let positives = examples.iter().filter(|e| e.label).count();
    println!(
        "examples={} positives={} negatives={}",
        examples.len(),
        positives,
        examples.len() - positives
    );
    println!(
        "training-accuracy={:.4}",
        classifier::training_accuracy(&model, &examples)?
    );
    println!("model={}", args.out.display());
    Ok(())
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<()> {
    let loaded = io::load_graph(&args.graph)?;
    let (result, trace) = match args.method {
        Method::Maxclique => (baselines::max_clique_baseline(&loaded.graph), None),
        Method::Cover => (baselines::clique_cover_baseline(&loaded.graph), None),
        Method::Marioh => {
            let model_path = args.model.as_ref().ok_or_else(|| {
                Error::Config("--method marioh requires --model (see --method maxclique/cover for model-free baselines)".into())
            })?;
            let model = classifier::load_model(model_path)?;
            let cfg = SearchConfig {
                theta_init: args.theta_init,
                r_percent: args.r_percent,
                alpha: args.alpha,
                max_iterations: args.max_iterations,
                seed: args.seed,
                exhaustion_fallback: !args.no_fallback,
            };
            let (h, trace) = reconstruct(&loaded.graph, &model, &cfg)?;
            (h, Some(trace))
        }
    };
    io::save_hypergraph(&args.out, &result, Some(&loaded.id_map))?;
    if let Some(trace_path) = &args.trace {
        match &trace {
            Some(t) => std::fs::write(trace_path, t.to_string()).map_err(|source| Error::Io {
                path: trace_path.display().to_string(),
                source,
            })?,
            None => eprintln!("warning: --trace is only produced by --method marioh"),
        }
    }
    println!(
        "unique-hyperedges={} instances={}",
        result.unique_count(),
        result.instance_count()
    );
    if let Some(t) = &trace {
        println!(
            "filtered-multiplicity={} iterations={}",
            t.filter.total_multiplicity_removed,
            t.records.len()
        );
    }
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let (truth, recon, _, warnings) =
        io::load_hypergraphs_joint(&args.truth, &args.recon, load_options(args.skip_invalid))?;
    print_warnings(&warnings);
    let (truth, recon) = match args.mode {
        EvalMode::Reduced => (truth.reduce_multiplicity(), recon.reduce_multiplicity()),
        EvalMode::Preserved => (truth, recon),
    };
    let report = property_report(&truth, &recon);
    print!("{report}");
    println!("jaccard={:.6}", jaccard(&truth, &recon));
    println!("multi-jaccard={:.6}", multi_jaccard(&truth, &recon));
    for s in &report.scalars {
        println!(
            "norm-diff[{}]={:.6}",
            s.name.replace(' ', "-"),
            s.normalized_difference
        );
    }
    for d in &report.distributions {
        println!("ks[{}]={:.6}", d.name.replace(' ', "-"), d.ks);
    }
    Ok(())
}

fn stats_for_graph(graph: &ProjectedGraph) {
    let edges = graph.edge_count();
    let avg_w = if edges == 0 {
        0.0
    } else {
        graph.total_weight() as f64 / edges as f64
    };
    println!("projection-edges={edges}");
    println!("projection-total-weight={}", graph.total_weight());
    println!("avg-edge-weight={avg_w:.4}");
    let (_, _, report) = hyperrec_core::filtering::filter_guaranteed(graph);
    println!("{report}");
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    match (&args.hypergraph, &args.graph) {
        (Some(path), None) => {
            let loaded = io::load_hypergraph(path, load_options(args.skip_invalid))?;
            print_warnings(&loaded.warnings);
            let h = &loaded.hypergraph;
            println!("nodes={}", h.node_count());
            println!("unique-hyperedges={}", h.unique_count());
            println!("hyperedge-instances={}", h.instance_count());
            let avg_m = if h.unique_count() == 0 {
                0.0
            } else {
                h.instance_count() as f64 / h.unique_count() as f64
            };
            println!("avg-multiplicity={avg_m:.4}");
            stats_for_graph(&h.clique_expansion());
            Ok(())
        }
        (None, Some(path)) => {
            let loaded = io::load_graph(path)?;
            println!("nodes={}", loaded.graph.node_count());
            stats_for_graph(&loaded.graph);
            Ok(())
        }
        _ => Err(Error::Config(
            "pass exactly one of --hypergraph or --graph".into(),
        )),
    }
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let cfg = SynthConfig {
        n_nodes: args.nodes,
        n_hyperedges: args.hyperedges,
        min_size: args.min_size,
        max_size: args.max_size,
        duplicate_prob: args.duplicate_prob,
        seed: args.seed,
    };
    let h = generate_synthetic(&cfg)?;
    io::save_hypergraph(&args.out, &h, None)?;
    println!(
        "unique-hyperedges={} instances={}",
        h.unique_count(),
        h.instance_count()
    );
    Ok(())
}
