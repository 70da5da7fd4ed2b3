//! Command-line harness: `run` executes a benchmark experiment,
//! `bound` evaluates the estimation-bias bound for a generated
//! auxiliary set, `augment` writes an auxiliary set plus its
//! provenance sidecar.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lzo::bench::{augment_for_ratio, emit_bound_report, run_experiment, DataFormat, ExperimentConfig, MethodSpec};
use lzo::data::{load_csv, load_libsvm, save_libsvm, write_csv, Dataset};
use lzo::error::Result;

#[derive(Parser)]
#[command(name = "lzo", about = "Leave-zero-out model selection benchmark harness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a repeated-trial selection experiment.
    Run(RunArgs),
    /// Evaluate the estimation-bias bound for an augmented set.
    Bound(BoundArgs),
    /// Generate an augmented validation set with provenance.
    Augment(AugmentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Libsvm,
    Csv,
}

impl From<FormatArg> for DataFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Libsvm => DataFormat::Libsvm,
            FormatArg::Csv => DataFormat::Csv,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Dataset path.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Dataset file format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// CSV label column (0-based).
    #[arg(long)]
    label_column: Option<usize>,
    /// CSV file starts with a header row.
    #[arg(long)]
    has_header: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Config file (TOML); CLI flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated methods: lzo,kfold,holdout,mccv,lpo.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,
    /// Fold count for kfold.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Auxiliary set size as a multiple of the training size.
    #[arg(long, default_value_t = 10.0)]
    m_ratio: f64,
    /// Beta shape for the mix-up weight.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Repeats for Monte-Carlo CV.
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    /// Held-out size for leave-p-out.
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Validation fraction for holdout/mccv.
    #[arg(long, default_value_t = 0.3)]
    val_fraction: f64,
    /// Candidate grid expression.
    #[arg(long)]
    grid: Option<String>,
    /// Epoch budget for every SVM candidate.
    #[arg(long)]
    epochs: Option<usize>,
    /// Number of repeated trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Test split fraction per trial.
    #[arg(long)]
    test_fraction: Option<f64>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Parallel trial workers (0 = rayon default).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 10.0)]
    m_ratio: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Histogram bins per feature for the divergence heuristic.
    #[arg(long, default_value_t = 8)]
    bins: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file.
    #[arg(long, default_value = "bound.json")]
    out: PathBuf,
}

#[derive(Args)]
struct AugmentArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 1.0)]
    m_ratio: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file; the provenance sidecar gets `.provenance.jsonl`.
    #[arg(long)]
    out: PathBuf,
    /// Write the augmented set as CSV instead of LIBSVM.
    #[arg(long)]
    csv: bool,
}

fn load_input(input: &InputArgs) -> Result<Dataset> {
    let path = input
        .data
        .as_ref()
        .ok_or_else(|| lzo::Error::Config("--data is required".into()))?;
    match input.format.unwrap_or(FormatArg::Libsvm) {
        FormatArg::Libsvm => load_libsvm(path),
        FormatArg::Csv => load_csv(path, input.label_column.unwrap_or(0), input.has_header),
    }
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::from_toml("data = \"\"")?,
    };
    if let Some(data) = &args.input.data {
        cfg.data = data.clone();
    }
    if let Some(format) = args.input.format {
        cfg.format = format.into();
    }
    if let Some(label_column) = args.input.label_column {
        cfg.label_column = label_column;
    }
    if args.input.has_header {
        cfg.has_header = true;
    }
    if !args.methods.is_empty() {
        cfg.methods = args
            .methods
            .iter()
            .map(|name| match name.as_str() {
                "lzo" => Ok(MethodSpec::Lzo { m_ratio: args.m_ratio, alpha: args.alpha }),
                "kfold" => Ok(MethodSpec::Kfold { k: args.k }),
                "holdout" => Ok(MethodSpec::Holdout { val_fraction: args.val_fraction }),
                "mccv" => Ok(MethodSpec::Mccv {
                    repeats: args.repeats,
                    val_fraction: args.val_fraction,
                }),
                "lpo" => Ok(MethodSpec::Lpo { p: args.p }),
                other => Err(lzo::Error::Config(format!("unknown method `{other}`"))),
            })
            .collect::<Result<_>>()?;
    }
    if let Some(grid) = &args.grid {
        cfg.grid = grid.clone();
    }
    if let Some(epochs) = args.epochs {
        cfg.epochs = epochs;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(test_fraction) = args.test_fraction {
        cfg.test_fraction = test_fraction;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = args.jobs {
        cfg.jobs = jobs;
    }
    if let Some(out) = &args.out {
        cfg.out = out.clone();
    }
    if cfg.data.as_os_str().is_empty() {
        return Err(lzo::Error::Config("no dataset given (--data or config file)".into()));
    }
    Ok(cfg)
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let cfg = build_config(args)?;
    let output = run_experiment(&cfg)?;
    println!(
        "{:<12} {:<16} {:>9} {:>9} {:>10} {:>8} {:>7}",
        "dataset", "method", "acc", "std", "time(s)", "models", "trials"
    );
    for row in &output.rows {
        println!(
            "{:<12} {:<16} {:>9.4} {:>9.4} {:>10.3} {:>8.1} {:>7}",
            row.dataset,
            row.method,
            row.mean_test_accuracy,
            row.std_test_accuracy,
            row.mean_wall_time,
            row.mean_models_trained,
            row.trials
        );
    }
    if output.skipped_trials > 0 {
        println!("skipped trials: {}", output.skipped_trials);
    }
    println!("wrote results.csv, results.json, trials.jsonl to {}", cfg.out.display());
    Ok(())
}

fn cmd_bound(args: &BoundArgs) -> Result<()> {
    let data = load_input(&args.input)?;
    let validation = augment_for_ratio(&data, args.m_ratio, args.alpha, args.seed)?;
    let document = emit_bound_report(
        &data,
        &validation,
        data.d,
        validation.data.n(),
        args.delta,
        args.bins,
    )?;
    let text = serde_json::to_string_pretty(&document)
        .map_err(|e| lzo::Error::Config(e.to_string()))?;
    fs::write(&args.out, &text)?;
    println!("{text}");
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_augment(args: &AugmentArgs) -> Result<()> {
    let data = load_input(&args.input)?;
    let augmented = augment_for_ratio(&data, args.m_ratio, args.alpha, args.seed)?;
    if args.csv {
        let mut file = fs::File::create(&args.out)?;
        write_csv(&augmented.data, &mut file, true)?;
    } else {
        save_libsvm(&augmented.data, &args.out)?;
    }
    let sidecar = PathBuf::from(format!("{}.provenance.jsonl", args.out.display()));
    let mut file = fs::File::create(&sidecar)?;
    augmented.write_provenance_jsonl(&mut file)?;
    println!(
        "wrote {} augmented samples to {} (provenance: {})",
        augmented.data.n(),
        args.out.display(),
        sidecar.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Augment(args) => cmd_augment(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
