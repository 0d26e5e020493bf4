//! `garoute` — QoS-graded genetic-algorithm bandwidth routing.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use garoute_cli::{exit_codes, render, run, sweep};
use garoute_core::{generate_random_topology, CrossoverKind, GaConfig, QosRanges, QosThresholds};

#[derive(Parser)]
#[command(
    name = "garoute",
    version,
    about = "QoS-graded genetic-algorithm routing: grade nodes by delay/jitter/loss, then select the route with maximum available bandwidth at minimum hop count"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a route for one demand and print per-generation tables
    Route(RouteArgs),
    /// Run one GA-vs-oracle experiment per seed and aggregate statistics
    Sweep(SweepArgs),
    /// Generate a random connected topology file
    Gen(GenArgs),
}

#[derive(Args)]
struct TopologyArgs {
    /// Topology file to load
    #[arg(long, value_name = "FILE", conflicts_with = "random")]
    topology: Option<PathBuf>,
    /// Generate a random connected topology with this many nodes
    #[arg(long, value_name = "N")]
    random: Option<usize>,
    /// Link probability for --random beyond the spanning tree
    #[arg(long, default_value_t = 0.4)]
    density: f64,
}

#[derive(Args)]
struct QosArgs {
    /// Maximum node delay in seconds (strictly-below admission)
    #[arg(long, default_value_t = 0.01)]
    delay_max: f64,
    /// Maximum node jitter in milliseconds
    #[arg(long, default_value_t = 9.0)]
    jitter_max: f64,
    /// Maximum node loss fraction
    #[arg(long, default_value_t = 0.045)]
    loss_max: f64,
}

#[derive(Args)]
struct GaArgs {
    /// Generations to run
    #[arg(long, default_value_t = 5)]
    generations: usize,
    /// Population size per generation
    #[arg(long, default_value_t = 5)]
    population: usize,
    /// Initial candidate draws before truncation to the population size
    #[arg(long, default_value_t = 10)]
    candidates: usize,
    /// Probability that a fill slot attempts crossover
    #[arg(long, default_value_t = 0.95)]
    crossover_rate: f64,
    /// Probability that a fill slot attempts mutation
    #[arg(long, default_value_t = 0.05)]
    mutation_rate: f64,
    /// Selection-probability floor for the final route choice
    #[arg(long, default_value_t = 0.5)]
    floor: f64,
    /// RNG seed (also seeds --random topology generation)
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Use single-point crossover instead of the partially mapped operator
    #[arg(long)]
    single_point: bool,
    /// Hop bound for path enumeration (default: node count - 1)
    #[arg(long)]
    max_hops: Option<usize>,
}

impl GaArgs {
    fn config(&self, seed: u64) -> GaConfig<f64> {
        GaConfig {
            population_size: self.population,
            initial_candidates: self.candidates,
            generations: self.generations,
            crossover_rate: self.crossover_rate,
            mutation_rate: self.mutation_rate,
            selection_floor: self.floor,
            crossover: if self.single_point {
                CrossoverKind::SinglePoint
            } else {
                CrossoverKind::MultiPointPmx
            },
            rng_seed: seed,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

impl From<FormatArg> for run::OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => run::OutputFormat::Text,
            FormatArg::Csv => run::OutputFormat::Csv,
            FormatArg::Json => run::OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct RouteArgs {
    #[command(flatten)]
    topology: TopologyArgs,
    /// Source node id
    #[arg(long)]
    source: usize,
    /// Destination node id
    #[arg(long)]
    dest: usize,
    /// Bandwidth the demand needs, bits/second
    #[arg(long)]
    required_bw: f64,
    /// Message size in bits (drives delay grading)
    #[arg(long, default_value_t = 12_000.0)]
    msg_size: f64,
    #[command(flatten)]
    qos: QosArgs,
    #[command(flatten)]
    ga: GaArgs,
    /// Knowledge-base file: answer recurring scenarios from storage
    #[arg(long, value_name = "FILE")]
    kb: Option<PathBuf>,
    /// Also run the exhaustive oracle and report agreement
    #[arg(long)]
    oracle_check: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Print the enumerated path pool before the tables
    #[arg(long)]
    dump_pool: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    topology: TopologyArgs,
    /// Inclusive seed range, e.g. 1-100
    #[arg(long, value_parser = parse_seed_range, default_value = "1-100")]
    seeds: (u64, u64),
    /// Fixed source node id (omit to derive demands per seed)
    #[arg(long, requires = "dest", requires = "required_bw")]
    source: Option<usize>,
    /// Fixed destination node id
    #[arg(long, requires = "source")]
    dest: Option<usize>,
    /// Fixed required bandwidth, bits/second
    #[arg(long, requires = "source")]
    required_bw: Option<f64>,
    /// Message size in bits
    #[arg(long, default_value_t = 12_000.0)]
    msg_size: f64,
    #[command(flatten)]
    qos: QosArgs,
    #[command(flatten)]
    ga: GaArgs,
    /// Write per-seed rows to this CSV file
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Node count
    #[arg(long)]
    nodes: usize,
    /// Link probability beyond the spanning tree
    #[arg(long, default_value_t = 0.4)]
    density: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn parse_seed_range(text: &str) -> Result<(u64, u64), String> {
    let parts: Vec<&str> = text.split('-').collect();
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad seed `{t}`"));
    match parts.as_slice() {
        [single] => {
            let s = parse(single)?;
            Ok((s, s))
        }
        [lo, hi] => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(format!("empty seed range `{text}`"));
            }
            Ok((lo, hi))
        }
        _ => Err(format!("expected `LO-HI`, got `{text}`")),
    }
}

fn topology_source(args: &TopologyArgs, seed: u64) -> Result<run::TopologySource, String> {
    match (&args.topology, args.random) {
        (Some(path), None) => Ok(run::TopologySource::File(path.clone())),
        (None, Some(nodes)) => Ok(run::TopologySource::Random {
            nodes,
            density: args.density,
            seed,
        }),
        (None, None) => Err("exactly one of --topology or --random is required".into()),
        (Some(_), Some(_)) => Err("--topology conflicts with --random".into()),
    }
}

fn cmd_route(args: &RouteArgs) -> Result<(), run::RunError> {
    let topology = topology_source(&args.topology, args.ga.seed).map_err(run::RunError::Input)?;
    let spec = run::RunSpec {
        topology,
        source: args.source,
        destination: args.dest,
        required_bandwidth: args.required_bw,
        message_size: args.msg_size,
        thresholds: QosThresholds::new(args.qos.delay_max, args.qos.jitter_max, args.qos.loss_max),
        config: args.ga.config(args.ga.seed),
        max_hops: args.ga.max_hops,
        format: args.format.into(),
        kb_path: args.kb.clone(),
        oracle_check: args.oracle_check,
        dump_pool: args.dump_pool,
    };
    let outcome = run::run_route(&spec)?;
    print!("{}", render::render_outcome(&outcome, spec.format));
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), run::RunError> {
    let topology = topology_source(&args.topology, 0).map_err(run::RunError::Input)?;
    let fixed_demand = match (args.source, args.dest, args.required_bw) {
        (Some(s), Some(d), Some(r)) => Some((s, d, r)),
        (None, None, None) => None,
        _ => {
            return Err(run::RunError::Input(
                "--source, --dest and --required-bw must be given together".into(),
            ))
        }
    };
    let params = sweep::SweepParams {
        topology,
        fixed_demand,
        message_size: args.msg_size,
        thresholds: QosThresholds::new(args.qos.delay_max, args.qos.jitter_max, args.qos.loss_max),
        config: args.ga.config(args.ga.seed),
        max_hops: args.ga.max_hops,
        seeds: args.seeds,
    };
    let summary = sweep::run_sweep(&params)?;
    if let Some(path) = &args.csv {
        std::fs::write(path, render::render_sweep_csv(&summary))
            .map_err(|e| run::RunError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{}", render::render_sweep_summary(&summary));
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<(), run::RunError> {
    let topo = generate_random_topology::<f64>(args.nodes, args.density, args.seed, &QosRanges::default())
        .map_err(|e| run::RunError::Input(e.to_string()))?;
    let text = topo.to_file_string();
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| run::RunError::Input(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                let _ = e.print();
                return ExitCode::from(exit_codes::ROUTE_FOUND as u8);
            }
            let _ = e.print();
            return ExitCode::from(exit_codes::INPUT_ERROR as u8);
        }
    };
    let result = match &cli.command {
        Command::Route(args) => cmd_route(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match result {
        Ok(()) => ExitCode::from(exit_codes::ROUTE_FOUND as u8),
        Err(e @ run::RunError::NoRoute(_)) => {
            eprintln!("garoute: {e}");
            ExitCode::from(exit_codes::NO_ROUTE as u8)
        }
        Err(e) => {
            eprintln!("garoute: {e}");
            ExitCode::from(exit_codes::INPUT_ERROR as u8)
        }
    }
}
