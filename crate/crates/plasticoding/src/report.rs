//! Comparison of run directories between the two encodings.
//!
//! Samples are per-repetition population means in the final generation;
//! line plots average the per-generation means over repetitions.

use std::fs;
use std::path::{Path, PathBuf};

use plasticoding_core::sim::DESCRIPTOR_NAMES;
use plasticoding_core::Encoding;

use crate::config::ConfigError;
use crate::experiment::{generations_header, robots_header, GENERATIONS_CSV, ROBOTS_CSV, SEASONS};
use crate::manifest::RunManifest;
use crate::stats::{median, rank_sum, Method};
use crate::svg::{self, Panel, Series};

pub const COMPARISON_CSV: &str = "comparison.csv";
pub const PLASTICITY_CSV: &str = "plasticity.csv";
pub const PLOTS_DIR: &str = "plots";

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Manifest { path: PathBuf, source: ConfigError },
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("no {0} run directories given")]
    Missing(Encoding),
    #[error("incompatible runs: {0}")]
    Incompatible(String),
}

fn read(path: &Path) -> Result<String, ReportError> {
    fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), ReportError> {
    fs::write(path, contents).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Numeric CSV body with a required header.
fn read_table(path: &Path, header: &str) -> Result<Vec<Vec<f64>>, ReportError> {
    let text = read(path)?;
    let mut lines = text.lines();
    let err = |line: usize, reason: String| ReportError::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    if lines.next() != Some(header) {
        return Err(err(1, "unexpected header".into()));
    }
    let width = header.split(',').count();
    lines
        .enumerate()
        .map(|(i, l)| {
            let row: Vec<f64> = l
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|e| err(i + 2, format!("{c:?}: {e}"))))
                .collect::<Result<_, _>>()?;
            if row.len() != width {
                return Err(err(i + 2, format!("{} columns, expected {width}", row.len())));
            }
            Ok(row)
        })
        .collect()
}

/// One repetition's logged data.
#[derive(Debug, Clone, PartialEq)]
pub struct Repetition {
    pub generations: Vec<Vec<f64>>,
    pub robots: Vec<Vec<f64>>,
}

const DESCRIPTOR_OFFSET: usize = 8;
const ROBOT_BEST: usize = 1;
const ROBOT_PLASTIC: usize = 3;

impl Repetition {
    pub fn load(dir: &Path) -> Result<Self, ReportError> {
        Ok(Self {
            generations: read_table(&dir.join(GENERATIONS_CSV), &generations_header())?,
            robots: read_table(&dir.join(ROBOTS_CSV), &robots_header())?,
        })
    }

    /// Generation-by-generation population mean of one descriptor.
    pub fn descriptor_series(&self, season: usize, descriptor: usize) -> Vec<f64> {
        let col = DESCRIPTOR_OFFSET + season * DESCRIPTOR_NAMES.len() + descriptor;
        self.generations.iter().map(|r| r[col]).collect()
    }

    /// Whether the repetition's best robot expressed different phenotypes.
    pub fn best_is_plastic(&self) -> bool {
        self.robots
            .iter()
            .any(|r| r[ROBOT_BEST] == 1.0 && r[ROBOT_PLASTIC] == 1.0)
    }

    pub fn final_plastic_fraction(&self) -> f64 {
        self.generations.last().map_or(0.0, |r| r[7])
    }

    fn final_mean_f1(&self, season: usize) -> f64 {
        self.generations.last().map_or(f64::NAN, |r| r[1 + 2 * season])
    }
}

/// All repetitions of one encoding, pooled over run directories.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSet {
    pub encoding: Encoding,
    pub repetitions: Vec<Repetition>,
}

impl RunSet {
    pub fn load(encoding: Encoding, dirs: &[PathBuf]) -> Result<Self, ReportError> {
        if dirs.is_empty() {
            return Err(ReportError::Missing(encoding));
        }
        let mut repetitions = Vec::new();
        for dir in dirs {
            let manifest = RunManifest::read(dir).map_err(|source| ReportError::Manifest {
                path: dir.clone(),
                source,
            })?;
            if manifest.config.encoding != encoding {
                return Err(ReportError::Incompatible(format!(
                    "{} holds {} runs, expected {encoding}",
                    dir.display(),
                    manifest.config.encoding
                )));
            }
            for entry in &manifest.repetitions {
                repetitions.push(Repetition::load(&dir.join(&entry.path))?);
            }
        }
        Ok(Self { encoding, repetitions })
    }

    fn generations(&self) -> Option<usize> {
        self.repetitions.first().map(|r| r.generations.len())
    }

    /// Mean over repetitions, per generation.
    pub fn mean_series(&self, season: usize, descriptor: usize) -> Vec<(f64, f64)> {
        let n = self.generations().unwrap_or(0);
        (0..n)
            .map(|g| {
                let mean = self
                    .repetitions
                    .iter()
                    .map(|r| r.descriptor_series(season, descriptor)[g])
                    .sum::<f64>()
                    / self.repetitions.len() as f64;
                ((g + 1) as f64, mean)
            })
            .collect()
    }

    /// Final-generation value of each repetition.
    pub fn final_sample(&self, season: usize, descriptor: usize) -> Vec<f64> {
        self.repetitions
            .iter()
            .filter_map(|r| r.descriptor_series(season, descriptor).last().copied())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub measure: String,
    pub season: &'static str,
    pub baseline_median: f64,
    pub plasticoding_median: f64,
    pub p_value: f64,
    pub method: Method,
}

impl ComparisonRow {
    /// Plasticoding median minus Baseline median.
    pub fn difference(&self) -> f64 {
        self.plasticoding_median - self.baseline_median
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlasticityRow {
    pub encoding: Encoding,
    pub repetitions: usize,
    pub best_plastic: usize,
    pub mean_final_plastic_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub comparison: Vec<ComparisonRow>,
    pub plasticity: Vec<PlasticityRow>,
    pub plots: Vec<PathBuf>,
}

impl Report {
    pub fn row(&self, measure: &str, season: &str) -> Option<&ComparisonRow> {
        self.comparison.iter().find(|r| r.measure == measure && r.season == season)
    }
}

fn compare(measure: &str, season: usize, base: &[f64], plast: &[f64]) -> ComparisonRow {
    let test = rank_sum(base, plast).expect("both samples are non-empty");
    ComparisonRow {
        measure: measure.to_string(),
        season: SEASONS[season],
        baseline_median: median(base).unwrap_or(f64::NAN),
        plasticoding_median: median(plast).unwrap_or(f64::NAN),
        p_value: test.p_value,
        method: test.method,
    }
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("measure,season,baseline_median,plasticoding_median,difference,p_value,method\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.measure,
            r.season,
            r.baseline_median,
            r.plasticoding_median,
            r.difference(),
            r.p_value,
            r.method.as_str()
        ));
    }
    out
}

pub fn plasticity_csv(rows: &[PlasticityRow]) -> String {
    let mut out = String::from("encoding,repetitions,best_plastic,mean_final_plastic_fraction\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.encoding, r.repetitions, r.best_plastic, r.mean_final_plastic_fraction
        ));
    }
    out
}

/// Builds plots and tables from the two run sets into `out`.
pub fn build_report(baseline: &RunSet, plasticoding: &RunSet, out: &Path) -> Result<Report, ReportError> {
    for set in [baseline, plasticoding] {
        if set.repetitions.is_empty() {
            return Err(ReportError::Missing(set.encoding));
        }
        let g = set.generations();
        if set.repetitions.iter().any(|r| Some(r.generations.len()) != g) || g == Some(0) {
            return Err(ReportError::Incompatible(format!(
                "{} repetitions log different or zero generation counts",
                set.encoding
            )));
        }
    }
    if baseline.generations() != plasticoding.generations() {
        return Err(ReportError::Incompatible("encodings ran different generation counts".into()));
    }
    let plots_dir = out.join(PLOTS_DIR);
    fs::create_dir_all(&plots_dir).map_err(|source| ReportError::Io {
        path: plots_dir.clone(),
        source,
    })?;

    let mut comparison = Vec::new();
    let mut plots = Vec::new();
    for s in 0..SEASONS.len() {
        let base: Vec<f64> = baseline.repetitions.iter().map(|r| r.final_mean_f1(s)).collect();
        let plast: Vec<f64> = plasticoding.repetitions.iter().map(|r| r.final_mean_f1(s)).collect();
        comparison.push(compare("f1", s, &base, &plast));
    }
    for (d, descriptor) in DESCRIPTOR_NAMES.iter().enumerate() {
        for (s, season) in SEASONS.iter().enumerate() {
            let base = baseline.final_sample(s, d);
            let plast = plasticoding.final_sample(s, d);
            comparison.push(compare(descriptor, s, &base, &plast));

            let lb = baseline.mean_series(s, d);
            let lp = plasticoding.mean_series(s, d);
            let left = Panel {
                x: 0.0,
                y: 0.0,
                width: 460.0,
                height: 320.0,
            };
            let right = Panel { x: 460.0, width: 260.0, ..left };
            let mut body = svg::line_plot(
                left,
                &format!("{descriptor} ({season}): population mean"),
                "generation",
                descriptor,
                &[
                    Series {
                        name: "baseline",
                        points: &lb,
                    },
                    Series {
                        name: "plasticoding",
                        points: &lp,
                    },
                ],
            );
            body.push_str(&svg::box_plot(
                right,
                "final generation",
                descriptor,
                &[("baseline", &base), ("plasticoding", &plast)],
            ));
            let path = plots_dir.join(format!("{descriptor}_{season}.svg"));
            write(&path, &svg::document(720.0, 320.0, &body))?;
            plots.push(path);
        }
    }

    let plasticity: Vec<PlasticityRow> = [baseline, plasticoding]
        .iter()
        .map(|set| PlasticityRow {
            encoding: set.encoding,
            repetitions: set.repetitions.len(),
            best_plastic: set.repetitions.iter().filter(|r| r.best_is_plastic()).count(),
            mean_final_plastic_fraction: set.repetitions.iter().map(Repetition::final_plastic_fraction).sum::<f64>()
                / set.repetitions.len() as f64,
        })
        .collect();

    write(&out.join(COMPARISON_CSV), &comparison_csv(&comparison))?;
    write(&out.join(PLASTICITY_CSV), &plasticity_csv(&plasticity))?;
    Ok(Report {
        comparison,
        plasticity,
        plots,
    })
}

/// Loads both encodings' run directories and builds the report.
pub fn report(baseline: &[PathBuf], plasticoding: &[PathBuf], out: &Path) -> Result<Report, ReportError> {
    let b = RunSet::load(Encoding::Baseline, baseline)?;
    let p = RunSet::load(Encoding::Plasticoding, plasticoding)?;
    build_report(&b, &p, out)
}

/// Human-readable comparison table.
pub fn format_table(r: &Report) -> String {
    let mut out = format!(
        "{:<14} {:<7} {:>14} {:>14} {:>12} {:>9} {:<6}\n",
        "measure", "season", "baseline_med", "plastic_med", "difference", "p", "method"
    );
    for row in &r.comparison {
        out.push_str(&format!(
            "{:<14} {:<7} {:>14.6} {:>14.6} {:>12.6} {:>9.4} {:<6}\n",
            row.measure,
            row.season,
            row.baseline_median,
            row.plasticoding_median,
            row.difference(),
            row.p_value,
            row.method.as_str()
        ));
    }
    for p in &r.plasticity {
        out.push_str(&format!(
            "{}: best robot plastic in {}/{} repetitions, mean final plastic fraction {:.3}\n",
            p.encoding, p.best_plastic, p.repetitions, p.mean_final_plastic_fraction
        ));
    }
    out
}
