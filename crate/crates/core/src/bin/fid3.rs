use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fuzzy_id3::data::{
    build_partitions, efforts, generate_synthetic, load_csv, write_csv_writer, DatasetSchema,
    EffortModel,
};
use fuzzy_id3::evaluation::{
    compare_models, default_beta_grid, evaluate_model, holdout_split, run_sweep,
};
use fuzzy_id3::fuzzy::{fuzzify_output, TNorm};
use fuzzy_id3::induction::{grow_crisp_tree, grow_fuzzy_tree, InductionConfig};
use fuzzy_id3::inference::predict_csv;
use fuzzy_id3::report::{render_comparison, render_evaluation, render_sweep, ReportFormat};
use fuzzy_id3::tree::FuzzyTree;
use fuzzy_id3::{Error, ErrorKind};

/// Fuzzy ID3 decision trees for software development effort estimation.
#[derive(Parser)]
#[command(name = "fid3", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic project dataset as CSV
    Generate(GenerateArgs),
    /// Train a fuzzy (or crisp) ID3 model and write the model file
    Train(TrainArgs),
    /// Batch-predict efforts for an attribute CSV
    Predict(PredictArgs),
    /// Evaluate a trained model against a dataset (MMRE, Pred(25))
    Evaluate(EvaluateArgs),
    /// Run the significance-level × t-norm accuracy sweep
    Sweep(SweepArgs),
    /// Compare crisp ID3 against both fuzzy models
    Compare(CompareArgs),
}

fn parse_tnorm(s: &str) -> Result<TNorm, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse()
}

/// Induction parameters shared by train and compare.
#[derive(Args)]
struct ModelOpts {
    /// Conjunction operator: product or min
    #[arg(long, value_parser = parse_tnorm, default_value = "product")]
    tnorm: TNorm,
    /// Significance level β in [0, 1]
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    /// Number of output effort classes (2..=7)
    #[arg(long, default_value_t = 5)]
    classes: usize,
    /// Default number of fuzzy sets per variable (2..=7)
    #[arg(long, default_value_t = 7)]
    sets: usize,
    /// Nodes lighter than this become leaves
    #[arg(long, default_value_t = 1e-6)]
    min_node_weight: f64,
}

impl ModelOpts {
    fn config(&self) -> fuzzy_id3::Result<InductionConfig> {
        let cfg = InductionConfig {
            tnorm: self.tnorm,
            beta: self.beta,
            min_node_weight: self.min_node_weight,
            num_output_classes: self.classes,
            default_num_sets: self.sets,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SplitOpts {
    /// Fraction of records used for training
    #[arg(long = "split", default_value_t = 0.7)]
    train_fraction: f64,
    /// Seed of the train/test permutation
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenerateArgs {
    /// Built-in schema name (tukutuku, cocomo81) or schema JSON path
    #[arg(long)]
    schema: String,
    /// Number of records
    #[arg(short = 'n', long = "count", default_value_t = 53)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative noise amplitude on the effort, in [0, 1)
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Training dataset CSV
    #[arg(long)]
    data: PathBuf,
    /// Built-in schema name or schema JSON path
    #[arg(long)]
    schema: String,
    #[command(flatten)]
    model: ModelOpts,
    /// Grow the crisp ID3 baseline instead of the fuzzy tree
    #[arg(long)]
    crisp: bool,
    /// Model file to write
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Trained model file
    #[arg(long)]
    model: PathBuf,
    /// Attribute CSV to predict
    #[arg(long)]
    data: PathBuf,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Trained model file
    #[arg(long)]
    model: PathBuf,
    /// Dataset CSV with actual efforts
    #[arg(long)]
    data: PathBuf,
    /// Schema used to read the dataset
    #[arg(long)]
    schema: String,
    /// Report format: text, csv or json
    #[arg(long, value_parser = parse_format, default_value = "text")]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    schema: String,
    /// Significance levels, comma separated (default 0.1 through 0.9)
    #[arg(long = "beta", value_delimiter = ',')]
    betas: Vec<f64>,
    /// T-norm columns, comma separated
    #[arg(long = "tnorm", value_parser = parse_tnorm, value_delimiter = ',',
          default_values = ["product", "min"])]
    tnorms: Vec<TNorm>,
    #[command(flatten)]
    split: SplitOpts,
    /// Number of output effort classes (2..=7)
    #[arg(long, default_value_t = 5)]
    classes: usize,
    /// Default number of fuzzy sets per variable (2..=7)
    #[arg(long, default_value_t = 7)]
    sets: usize,
    /// Evaluate cells on the training part instead of the test part
    #[arg(long)]
    on_train: bool,
    #[arg(long, value_parser = parse_format, default_value = "text")]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    schema: String,
    #[command(flatten)]
    model: ModelOpts,
    #[command(flatten)]
    split: SplitOpts,
    #[arg(long, value_parser = parse_format, default_value = "text")]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_output(out: &Option<PathBuf>, content: &str) -> fuzzy_id3::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn validate_fraction(fraction: f64) -> fuzzy_id3::Result<()> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidTrainFraction(fraction));
    }
    Ok(())
}

fn require_file(path: &std::path::Path) -> fuzzy_id3::Result<()> {
    if !path.is_file() {
        return Err(Error::InputFileMissing(path.display().to_string()));
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> fuzzy_id3::Result<()> {
    let model = EffortModel {
        noise: args.noise,
        ..EffortModel::default()
    };
    let schema = DatasetSchema::resolve(&args.schema)?;
    let records = generate_synthetic(&schema, args.count, args.seed, &model)?;
    let mut buf = Vec::new();
    write_csv_writer(&mut buf, &schema, &records)?;
    write_output(&args.out, std::str::from_utf8(&buf).expect("CSV is UTF-8"))?;
    Ok(())
}

fn cmd_train(args: TrainArgs) -> fuzzy_id3::Result<()> {
    let cfg = args.model.config()?;
    require_file(&args.data)?;
    let schema = DatasetSchema::resolve(&args.schema)?;
    let records = load_csv(&args.data, &schema)?;
    let partitions = build_partitions(&records, &schema, cfg.default_num_sets)?;
    let output = fuzzify_output(&efforts(&records), cfg.num_output_classes)?;
    let tree = if args.crisp {
        grow_crisp_tree(&records, &partitions, &output, &cfg)?
    } else {
        grow_fuzzy_tree(&records, &partitions, &output, &cfg)?
    };
    tree.save(&args.out)?;

    println!("model written to {}", args.out.display());
    println!(
        "nodes: {} (leaves: {}, empty leaves: {}, depth: {})",
        tree.node_count(),
        tree.leaf_count(),
        tree.empty_leaf_count(),
        tree.depth()
    );
    println!("variable usage (splits per variable):");
    for (name, count) in tree.variable_usage() {
        println!("  {name}: {count}");
    }
    Ok(())
}

fn cmd_predict(args: PredictArgs) -> fuzzy_id3::Result<()> {
    require_file(&args.model)?;
    require_file(&args.data)?;
    let tree = FuzzyTree::load(&args.model)?;
    let input = std::fs::File::open(&args.data)?;
    let mut buf = Vec::new();
    predict_csv(&tree, input, &mut buf)?;
    write_output(&args.out, std::str::from_utf8(&buf).expect("CSV is UTF-8"))?;
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> fuzzy_id3::Result<()> {
    require_file(&args.model)?;
    require_file(&args.data)?;
    let tree = FuzzyTree::load(&args.model)?;
    let schema = DatasetSchema::resolve(&args.schema)?;
    let records = load_csv(&args.data, &schema)?;
    let report = evaluate_model(&tree, &records, "external dataset", None)?;
    write_output(&args.out, &render_evaluation(&report, args.format)?)?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> fuzzy_id3::Result<()> {
    let cfg = InductionConfig {
        num_output_classes: args.classes,
        default_num_sets: args.sets,
        ..InductionConfig::default()
    };
    cfg.validate()?;
    validate_fraction(args.split.train_fraction)?;
    let betas = if args.betas.is_empty() {
        default_beta_grid()
    } else {
        args.betas.clone()
    };
    for &beta in &betas {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidBeta(beta));
        }
    }

    require_file(&args.data)?;
    let schema = DatasetSchema::resolve(&args.schema)?;
    let records = load_csv(&args.data, &schema)?;
    let split = holdout_split(&records, args.split.train_fraction, args.split.seed)?;
    let table = run_sweep(&split, &schema, &betas, &args.tnorms, &cfg, args.on_train)?;
    write_output(&args.out, &render_sweep(&table, args.format)?)?;
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> fuzzy_id3::Result<()> {
    let cfg = args.model.config()?;
    validate_fraction(args.split.train_fraction)?;
    require_file(&args.data)?;
    let schema = DatasetSchema::resolve(&args.schema)?;
    let records = load_csv(&args.data, &schema)?;
    let split = holdout_split(&records, args.split.train_fraction, args.split.seed)?;
    let report = compare_models(&split, &schema, &cfg)?;
    write_output(&args.out, &render_comparison(&report, args.format)?)?;
    Ok(())
}

fn run(cli: Cli) -> fuzzy_id3::Result<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Compare(args) => cmd_compare(args),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as ClapKind;
            if matches!(e.kind(), ClapKind::DisplayHelp | ClapKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("error[usage]: {}", first_line(&e.to_string()));
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (label, code) = match e.kind() {
                ErrorKind::Config => ("config", 1),
                ErrorKind::Data => ("data", 2),
                ErrorKind::Internal => ("internal", 3),
            };
            eprintln!("error[{label}]: {e}");
            ExitCode::from(code)
        }
    }
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or(s)
}
