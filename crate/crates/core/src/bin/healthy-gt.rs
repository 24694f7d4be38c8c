use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use healthy_gt::bounds::BoundReport;
use healthy_gt::decode::Scheme;
use healthy_gt::experiments::{
    compare_factors, estimate_pe_with, order_tables, sweep_m, write_csv, write_json, Meta, NoiseCase, Record,
    RunOptions, DEFAULT_TRIALS,
};
use healthy_gt::model::{DesignParams, NoiseParams, ProblemConfig};
use healthy_gt::Error;

#[derive(Parser)]
#[command(
    name = "healthy-gt",
    version,
    about = "Bounds and simulations for finding non-defective items by group testing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytical bounds for one configuration.
    Bounds(BoundsArgs),
    /// Monte Carlo error estimate at one test count.
    Simulate(SimulateArgs),
    /// Monte Carlo error estimates over a list of test counts.
    Sweep(SweepArgs),
    /// Factor comparison data on the `M I^(1)` scale.
    Figure1(Figure1Args),
    /// Computed thresholds against their predicted orders.
    Tables(TablesArgs),
}

#[derive(Args)]
struct Dims {
    /// Number of items.
    #[arg(long)]
    n: usize,
    /// Number of defective items.
    #[arg(long)]
    k: usize,
    /// Number of non-defective items to find.
    #[arg(long)]
    l: usize,
}

#[derive(Args)]
struct Channel {
    /// Pool density; defaults to 1/K (0.5 when K = 1).
    #[arg(long)]
    p: Option<f64>,
    /// Dilution probability.
    #[arg(long, default_value_t = 0.0)]
    u: f64,
    /// Additive-noise probability.
    #[arg(long, default_value_t = 0.0)]
    q: f64,
}

#[derive(Args)]
struct Sim {
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Multistage)]
    scheme: SchemeArg,
    /// Bypass the subset-enumeration guardrail.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    dims: Dims,
    /// Test count for the error-probability bound (omitted when 0).
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[command(flatten)]
    channel: Channel,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    dims: Dims,
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    channel: Channel,
    #[command(flatten)]
    sim: Sim,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    dims: Dims,
    /// Comma-separated test counts.
    #[arg(long, value_delimiter = ',', required = true)]
    m_list: Vec<usize>,
    #[command(flatten)]
    channel: Channel,
    #[command(flatten)]
    sim: Sim,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Figure1Args {
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Single panel; both K = 1 and K = 8 when omitted.
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated L values; all of 1..=N-K when omitted.
    #[arg(long, value_delimiter = ',')]
    l_list: Vec<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct TablesArgs {
    /// Single K; 8, 16, 32 and 64 when omitted.
    #[arg(long)]
    k: Option<usize>,
    /// Dilution probability of the dilution case.
    #[arg(long, default_value_t = 0.5)]
    u: f64,
    /// Additive-noise probability of the additive case.
    #[arg(long, default_value_t = 0.1)]
    q: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Scheme1,
    #[value(name = "k1_sort")]
    K1Sort,
    Multistage,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Scheme1 => Scheme::Scheme1,
            SchemeArg::K1Sort => Scheme::K1Sort,
            SchemeArg::Multistage => Scheme::Multistage,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

const TABLE_ALPHAS: [f64; 4] = [0.05, 0.1, 0.25, 0.5];
const TABLE_KS: [usize; 4] = [8, 16, 32, 64];
const TABLE_N_PER_K: usize = 64;

/// Argument-level failures exit with 2, everything else with 1.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_) | Error::Domain { .. } | Error::WrongK(_) => 2,
        _ => 1,
    }
}

fn resolve(dims: &Dims, m: usize, channel: &Channel) -> Result<(ProblemConfig, DesignParams, NoiseParams), Error> {
    let config = ProblemConfig::new(dims.n, dims.k, dims.l, m)?;
    let design = match channel.p {
        Some(p) => DesignParams::new(p)?,
        None => DesignParams::default_for(dims.k),
    };
    let noise = NoiseParams::new(channel.u, channel.q)?;
    Ok((config, design, noise))
}

fn problem_meta(command: &str, config: &ProblemConfig, design: &DesignParams, noise: &NoiseParams) -> Meta {
    let mut meta = Meta::new();
    meta.push("command", command)
        .push("n", config.n())
        .push("k", config.k())
        .push("l", config.l())
        .push("m", config.m())
        .push("p", design.p())
        .push("u", noise.u())
        .push("q", noise.q());
    meta
}

fn sim_meta(meta: &mut Meta, sim: &Sim) {
    meta.push("scheme", Scheme::from(sim.scheme))
        .push("trials", sim.trials)
        .push("seed", sim.seed)
        .push("force", sim.force);
}

fn emit<R: Record>(
    output: &Output,
    meta: &Meta,
    rows: &[R],
    extra: Option<(&str, serde_json::Value)>,
) -> Result<(), Error> {
    let sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(File::create(path).map_err(|e| Error::Output(format!("{}: {e}", path.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match output.format {
        Format::Csv => write_csv(&mut sink, meta, rows)?,
        Format::Json => write_json(&mut sink, meta, rows, extra)?,
    }
    sink.flush().map_err(|e| Error::Output(e.to_string()))
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Bounds(args) => {
            let (config, design, noise) = resolve(&args.dims, args.m, &args.channel)?;
            let report = BoundReport::compute(&config, &design, &noise)?;
            let meta = problem_meta("bounds", &config, &design, &noise);
            let details = serde_json::to_value([&report]).map_err(|e| Error::Output(e.to_string()))?;
            emit(&args.output, &meta, &[report.csv_row()], Some(("reports", details)))
        }
        Command::Simulate(args) => {
            let (config, design, noise) = resolve(&args.dims, args.m, &args.channel)?;
            let mut meta = problem_meta("simulate", &config, &design, &noise);
            sim_meta(&mut meta, &args.sim);
            let options = RunOptions {
                force: args.sim.force,
                ..RunOptions::default()
            };
            let batch = estimate_pe_with(
                &config,
                &design,
                &noise,
                args.sim.scheme.into(),
                args.m,
                args.sim.trials,
                args.sim.seed,
                options,
            )?;
            eprintln!("wall_time_ms={}", batch.wall_time_ms);
            emit(&args.output, &meta, &[batch.row()], None)
        }
        Command::Sweep(args) => {
            let (config, design, noise) = resolve(&args.dims, 0, &args.channel)?;
            let mut meta = problem_meta("sweep", &config, &design, &noise);
            sim_meta(&mut meta, &args.sim);
            let m_list: Vec<String> = args.m_list.iter().map(usize::to_string).collect();
            meta.push("m_list", m_list.join(","));
            let options = RunOptions {
                force: args.sim.force,
                ..RunOptions::default()
            };
            let batches = sweep_m(
                &config,
                &design,
                &noise,
                args.sim.scheme.into(),
                &args.m_list,
                args.sim.trials,
                args.sim.seed,
                options,
            )?;
            let total: u64 = batches.iter().map(|b| b.wall_time_ms).sum();
            eprintln!("wall_time_ms={total}");
            let rows: Vec<_> = batches.iter().map(|b| b.row()).collect();
            emit(&args.output, &meta, &rows, None)
        }
        Command::Figure1(args) => {
            let ks = args.k.map_or(vec![1, 8], |k| vec![k]);
            let mut meta = Meta::new();
            meta.push("command", "figure1").push("n", args.n);
            let k_list: Vec<String> = ks.iter().map(usize::to_string).collect();
            meta.push("k_list", k_list.join(","));
            let mut rows = Vec::new();
            for &k in &ks {
                if k == 0 || k >= args.n {
                    return Err(Error::InvalidConfig(format!(
                        "need 1 <= K < N, got K = {k}, N = {}",
                        args.n
                    )));
                }
                let l_list = if args.l_list.is_empty() {
                    (1..=args.n - k).collect()
                } else {
                    args.l_list.clone()
                };
                rows.extend(compare_factors(args.n, k, &l_list)?);
            }
            if !args.l_list.is_empty() {
                let l_list: Vec<String> = args.l_list.iter().map(usize::to_string).collect();
                meta.push("l_list", l_list.join(","));
            }
            emit(&args.output, &meta, &rows, None)
        }
        Command::Tables(args) => {
            let ks = args.k.map_or(TABLE_KS.to_vec(), |k| vec![k]);
            let cases = [
                NoiseCase::Noiseless,
                NoiseCase::Dilution { u: args.u },
                NoiseCase::Additive { q: args.q },
            ];
            let mut meta = Meta::new();
            let k_list: Vec<String> = ks.iter().map(usize::to_string).collect();
            let alphas: Vec<String> = TABLE_ALPHAS.iter().map(f64::to_string).collect();
            meta.push("command", "tables")
                .push("k_list", k_list.join(","))
                .push("alpha_list", alphas.join(","))
                .push("n_per_k", TABLE_N_PER_K)
                .push("p", "1/K")
                .push("u", args.u)
                .push("q", args.q);
            let rows = order_tables(&ks, &TABLE_ALPHAS, &cases, TABLE_N_PER_K)?;
            emit(&args.output, &meta, &rows, None)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
