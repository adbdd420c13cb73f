use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::{error, info};

use esn_bench::activation::Registry;
use esn_bench::harness::{self, ExperimentConfig, TaskKind};
use esn_bench::timeseries::{MgVariant, NarmaOrder, SeriesKind, SeriesSpec};
use esn_bench::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_ALL_DIVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "esn-bench", version, about = "Echo state network activation-function benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an (activation x size x trial) sweep and write CSV/SVG outputs.
    Run(RunArgs),
    /// Export a generated benchmark series to CSV.
    Series(SeriesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Paper,
    Standard,
}

impl From<VariantArg> for MgVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Paper => MgVariant::PaperVerbatim,
            VariantArg::Standard => MgVariant::Standard,
        }
    }
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON experiment config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    task: Option<String>,
    /// Activation name; repeat for several.
    #[arg(long = "activation")]
    activations: Vec<String>,
    /// Comma-separated reservoir sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum)]
    mge_variant: Option<VariantArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKindArg {
    Logistic,
    Mge,
    Narma10,
    Narma20,
}

#[derive(clap::Args)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    kind: SeriesKindArg,
    #[arg(long, default_value_t = 3000)]
    length: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "paper")]
    mge_variant: VariantArg,
    #[arg(long)]
    out: PathBuf,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Csv(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn build_config(args: RunArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(task) = &args.task {
        cfg.task = task.parse::<TaskKind>()?;
    }
    if !args.activations.is_empty() {
        cfg.activations = args.activations;
    }
    if let Some(sizes) = args.sizes {
        cfg.sizes = sizes;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(sigma) = args.sigma {
        cfg.sigma = Some(sigma);
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = args.out {
        cfg.out_dir = out;
    }
    if let Some(workers) = args.workers {
        cfg.workers = Some(workers);
    }
    if let Some(v) = args.mge_variant {
        cfg.mge_variant = v.into();
    }
    cfg.validate(&Registry::standard())?;
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<u8, Error> {
    let cfg = build_config(args)?;
    let result = harness::run(&cfg)?;
    let written = harness::emit_outputs(&result, &cfg)?;
    for m in &result.medians {
        println!("{:<12} D_x={:<5} median logNMSE {:>10.4}  ({} diverged of {})", m.activation, m.size, m.median, m.diverged, m.trials);
    }
    for path in written {
        info!("wrote {}", path.display());
    }
    if result.all_diverged() {
        error!("every trial diverged");
        return Ok(EXIT_ALL_DIVERGED);
    }
    Ok(0)
}

fn export_series(args: SeriesArgs) -> Result<u8, Error> {
    let kind = match args.kind {
        SeriesKindArg::Logistic => SeriesKind::Logistic,
        SeriesKindArg::Mge => SeriesKind::MackeyGlass(args.mge_variant.into()),
        SeriesKindArg::Narma10 => SeriesKind::Narma(NarmaOrder::Ten),
        SeriesKindArg::Narma20 => SeriesKind::Narma(NarmaOrder::Twenty),
    };
    let spec = SeriesSpec {
        kind,
        length: args.length,
        seed: args.seed,
    };
    let columns = spec.generate()?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_path(&args.out)?;
    let mut header = vec!["t".to_string()];
    header.extend(columns.iter().map(|(name, _)| name.to_string()));
    w.write_record(&header)?;
    for t in 0..args.length {
        let mut row = vec![t.to_string()];
        row.extend(columns.iter().map(|(_, v)| v[t].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Series(args) => export_series(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            error!("{e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
