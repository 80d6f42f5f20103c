//! Running repetitions and persisting their artifacts.
//!
//! Layout of a run directory:
//!
//! ```text
//! manifest.txt
//! rep_000/generations.csv
//! rep_000/robots.csv
//! rep_000/final_population/000.geno ...
//! rep_000/best/genotype.geno, flat.svg, tilted.svg
//! ```

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use plasticoding_core::evolution::{best, Evaluator, Evolution, EvolutionConfig, EvolutionConfigError, GenerationStats, Individual};
use plasticoding_core::sim::DESCRIPTOR_NAMES;
use plasticoding_core::text::serialize_genotype;

use crate::evaluator::ParallelEvaluator;
use crate::manifest::{RepetitionEntry, RunManifest};
use crate::svg;

pub const GENERATIONS_CSV: &str = "generations.csv";
pub const ROBOTS_CSV: &str = "robots.csv";
pub const SEASONS: [&str; 2] = ["flat", "tilted"];

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] EvolutionConfigError),
    #[error("thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

fn io<T>(path: &Path, r: std::io::Result<T>) -> Result<T, RunError> {
    r.map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn descriptor_columns(prefix: &str) -> impl Iterator<Item = String> + '_ {
    SEASONS
        .iter()
        .flat_map(move |s| DESCRIPTOR_NAMES.iter().map(move |d| format!("{prefix}{s}_{d}")))
}

/// Header of `generations.csv`.
pub fn generations_header() -> String {
    let mut cols: Vec<String> = [
        "generation",
        "mean_f1_flat",
        "max_f1_flat",
        "mean_f1_tilted",
        "max_f1_tilted",
        "consolidated_mean",
        "consolidated_max",
        "plastic_fraction",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    cols.extend(descriptor_columns("mean_"));
    cols.join(",")
}

pub fn generation_row(s: &GenerationStats) -> String {
    let mut cols = vec![
        s.generation.to_string(),
        s.flat.mean_f1.to_string(),
        s.flat.max_f1.to_string(),
        s.tilted.mean_f1.to_string(),
        s.tilted.max_f1.to_string(),
        s.consolidated_mean.to_string(),
        s.consolidated_max.to_string(),
        s.plastic_fraction.to_string(),
    ];
    for season in [&s.flat, &s.tilted] {
        cols.extend(season.descriptor_means.iter().map(f64::to_string));
    }
    cols.join(",")
}

/// Header of `robots.csv`.
pub fn robots_header() -> String {
    let mut cols: Vec<String> = ["id", "best", "consolidated", "plastic", "f1_flat", "f1_tilted"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend(descriptor_columns(""));
    cols.join(",")
}

pub fn robot_row(ind: &Individual, is_best: bool) -> String {
    let e = &ind.evaluation;
    let mut cols = vec![
        ind.id.to_string(),
        u8::from(is_best).to_string(),
        ind.consolidated.to_string(),
        u8::from(e.is_plastic()).to_string(),
        e.flat.fitness.to_string(),
        e.tilted.fitness.to_string(),
    ];
    for season in [&e.flat, &e.tilted] {
        cols.extend(season.descriptors.values().iter().map(f64::to_string));
    }
    cols.join(",")
}

pub fn repetition_dir(index: usize) -> PathBuf {
    PathBuf::from(format!("rep_{index:03}"))
}

/// Runs one repetition into `dir` with the given evaluator.
pub fn run_repetition<E: Evaluator + ?Sized>(
    cfg: &EvolutionConfig,
    evaluator: &E,
    index: usize,
    dir: &Path,
) -> Result<RepetitionEntry, RunError> {
    let start = Instant::now();
    let seed = cfg.repetition_seed(index);
    io(dir, fs::create_dir_all(dir))?;
    let mut evo = Evolution::new(cfg.clone(), evaluator, seed)?;

    let csv_path = dir.join(GENERATIONS_CSV);
    let mut csv = BufWriter::new(io(&csv_path, File::create(&csv_path))?);
    io(&csv_path, writeln!(csv, "{}", generations_header()))?;
    while !evo.is_finished() {
        let stats = evo.step();
        io(&csv_path, writeln!(csv, "{}", generation_row(&stats)))?;
    }
    io(&csv_path, csv.flush())?;

    let pop = evo.population();
    let champion = best(pop).and_then(|b| pop.iter().position(|x| std::ptr::eq(x, b)));
    let robots_path = dir.join(ROBOTS_CSV);
    let mut robots = String::new();
    robots.push_str(&robots_header());
    robots.push('\n');
    for (i, ind) in pop.iter().enumerate() {
        robots.push_str(&robot_row(ind, Some(i) == champion));
        robots.push('\n');
    }
    io(&robots_path, fs::write(&robots_path, robots))?;

    let final_dir = dir.join("final_population");
    io(&final_dir, fs::create_dir_all(&final_dir))?;
    for (i, ind) in pop.iter().enumerate() {
        let p = final_dir.join(format!("{i:03}.geno"));
        io(&p, fs::write(&p, serialize_genotype(&ind.genotype)))?;
    }

    if let Some(b) = best(pop) {
        let best_dir = dir.join("best");
        io(&best_dir, fs::create_dir_all(&best_dir))?;
        let p = best_dir.join("genotype.geno");
        io(&p, fs::write(&p, serialize_genotype(&b.genotype)))?;
        for (name, record) in SEASONS.iter().zip([&b.evaluation.flat, &b.evaluation.tilted]) {
            let title = format!(
                "rep {index} robot {} ({name}): size {}, f1 {:.4}",
                b.id, record.descriptors.size, record.fitness
            );
            let p = best_dir.join(format!("{name}.svg"));
            io(&p, fs::write(&p, svg::morphology(&record.phenotype, &title)))?;
        }
    }
    log::info!("repetition {index} (seed {seed}) finished in {:.2?}", start.elapsed());
    Ok(RepetitionEntry {
        index,
        seed,
        path: repetition_dir(index),
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs every repetition with `evaluator` and writes the manifest last.
pub fn run_experiment_with<E: Evaluator + ?Sized>(
    cfg: &EvolutionConfig,
    evaluator: &E,
    out: &Path,
) -> Result<RunManifest, RunError> {
    cfg.validate()?;
    io(out, fs::create_dir_all(out))?;
    let mut manifest = RunManifest::new(cfg.clone());
    for r in 0..cfg.repetitions {
        let entry = run_repetition(cfg, evaluator, r, &out.join(repetition_dir(r)))?;
        manifest.repetitions.push(entry);
    }
    io(out, manifest.write(out))?;
    Ok(manifest)
}

/// Runs every repetition on a thread pool of `threads` workers.
pub fn run_experiment(cfg: &EvolutionConfig, out: &Path, threads: Option<usize>) -> Result<RunManifest, RunError> {
    cfg.validate()?;
    let evaluator = ParallelEvaluator::new(cfg.development.clone(), cfg.sim.clone(), threads)?;
    run_experiment_with(cfg, &evaluator, out)
}
