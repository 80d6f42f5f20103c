use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use plasticoding::config::{self, ConfigError};
use plasticoding::develop::{inspect, lsystem_listing, parse_input, simulate_csv, Input};
use plasticoding::experiment::run_experiment;
use plasticoding::report::{format_table, report};
use plasticoding::svg;
use plasticoding_core::clause::EnvironmentState;
use plasticoding_core::evolution::EvolutionConfig;
use plasticoding_core::text::serialize_genotype;
use plasticoding_core::variation::init_genotype;
use plasticoding_core::{Encoding, RandomStream};

#[derive(Parser)]
#[command(name = "plasticoding", version, about = "Evolve modular robots with environmentally regulated L-systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an evolutionary experiment.
    Run(RunArgs),
    /// Develop one genotype (or iterate an L-system) and print what happened.
    Develop(DevelopArgs),
    /// Compare baseline and plasticoding run directories.
    Report(ReportArgs),
    /// Write a random genotype.
    Sample(SampleArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// baseline or plasticoding.
    #[arg(long)]
    encoding: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    /// Population size; also the offspring size unless that is set.
    #[arg(long)]
    pop: Option<usize>,
    /// Offspring per generation.
    #[arg(long)]
    lambda: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// key=value configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Evaluation threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Env {
    Flat,
    Tilted,
}

#[derive(clap::Args)]
struct DevelopArgs {
    /// A .geno file or an L-system file.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "flat")]
    env: Env,
    /// Rewriting iterations for L-system files.
    #[arg(long, default_value_t = 3)]
    iterations: usize,
    /// Write the developed morphology as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Simulate one season and write its step,x,roll,pitch trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// key=value configuration file for development and simulation settings.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ReportArgs {
    /// Baseline run directories.
    #[arg(long, num_args = 1.., required = true)]
    baseline: Vec<PathBuf>,
    /// Plasticoding run directories.
    #[arg(long, num_args = 1.., required = true)]
    plasticoding: Vec<PathBuf>,
    /// Output directory for plots and tables.
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct SampleArgs {
    #[arg(long, default_value = "plasticoding")]
    encoding: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output .geno file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(ConfigError),
    Runtime(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn base_config(path: Option<&PathBuf>) -> Result<(EvolutionConfig, bool), ConfigError> {
    let Some(path) = path else {
        return Ok((EvolutionConfig::default(), false));
    };
    let cfg = config::load(path)?;
    let text = std::fs::read_to_string(path).unwrap_or_default();
    let sets_lambda = config::parse_pairs(&text)?
        .iter()
        .any(|(_, k, _)| k == "offspring_size");
    Ok((cfg, sets_lambda))
}

fn run_config(args: &RunArgs) -> Result<EvolutionConfig, ConfigError> {
    let (mut cfg, config_sets_lambda) = base_config(args.config.as_ref())?;
    if let Some(e) = &args.encoding {
        config::apply(&mut cfg, "encoding", e)?;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.repetitions {
        cfg.repetitions = v;
    }
    if let Some(v) = args.generations {
        cfg.generations = v;
    }
    if let Some(v) = args.pop {
        cfg.mu = v;
        if args.lambda.is_none() && !config_sets_lambda {
            cfg.lambda = v;
        }
    }
    if let Some(v) = args.lambda {
        cfg.lambda = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let cfg = run_config(&args)?;
    if args.threads == Some(0) {
        return Err(ConfigError::Value {
            key: "threads".into(),
            value: "0".into(),
            reason: "must be at least 1".into(),
        }
        .into());
    }
    let manifest = run_experiment(&cfg, &args.out, args.threads)
        .with_context(|| format!("running into {}", args.out.display()))?;
    println!(
        "{} repetitions of {} written to {}",
        manifest.repetitions.len(),
        cfg.encoding,
        args.out.display()
    );
    Ok(())
}

fn cmd_develop(args: DevelopArgs) -> Result<(), Failure> {
    let (cfg, _) = base_config(args.config.as_ref())?;
    cfg.validate().map_err(ConfigError::from)?;
    let text = std::fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let input = parse_input(&text).with_context(|| format!("parsing {}", args.file.display()))?;
    let g = match input {
        Input::LSystem(ls) => {
            print!("{}", lsystem_listing(&ls, args.iterations));
            return Ok(());
        }
        Input::Genotype(g) => g,
    };
    let env = match args.env {
        Env::Flat => EnvironmentState::flat(),
        Env::Tilted => EnvironmentState::tilted(),
    };
    let inspection = inspect(&g, &env, &cfg.development);
    print!("{}", inspection.report);
    if let Some(path) = &args.svg {
        let title = args.file.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        std::fs::write(path, svg::morphology(&inspection.phenotype, &title))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.trace {
        std::fs::write(path, simulate_csv(&inspection.phenotype, &env, &cfg.sim))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<(), Failure> {
    let r = report(&args.baseline, &args.plasticoding, &args.out).context("building report")?;
    print!("{}", format_table(&r));
    println!("{} plots written to {}", r.plots.len(), args.out.display());
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<(), Failure> {
    let encoding: Encoding = args.encoding.parse().map_err(|e: plasticoding_core::genotype::UnknownEncoding| {
        ConfigError::Value {
            key: "encoding".into(),
            value: args.encoding.clone(),
            reason: e.to_string(),
        }
    })?;
    let cfg = EvolutionConfig::default();
    let g = init_genotype(encoding, &cfg.variation, &mut RandomStream::new(args.seed));
    let text = serialize_genotype(&g);
    match &args.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Develop(a) => cmd_develop(a),
        Command::Report(a) => cmd_report(a),
        Command::Sample(a) => cmd_sample(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("configuration error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
