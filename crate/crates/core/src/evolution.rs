//! Fitness, dominance-count consolidation, tournaments and the
//! overlapping-generations loop.

use alloc::vec::Vec;

use crate::development::{DevelopmentConfig, DevelopmentConfigError};
use crate::genotype::{Encoding, Genotype};
use crate::rng::RandomStream;
use crate::sim::{evaluate_seasonal, EvaluationRecord, SimConfig, SimConfigError};
use crate::variation::{crossover, init_genotype, mutate, VariationConfig, VariationError};

/// Speed-based fitness: positive speed as is, negative speed damped by 10,
/// standing still penalized with −0.1.
pub fn fitness_f1(speed: f64) -> f64 {
    if speed > 0.0 {
        speed
    } else if speed < 0.0 {
        speed / 10.0
    } else {
        -0.1
    }
}

/// Pareto dominance with every objective maximized.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        strictly |= x > y;
    }
    strictly
}

/// Number of pool members each entry dominates.
pub fn dominance_counts(objectives: &[[f64; 2]]) -> Vec<usize> {
    objectives
        .iter()
        .map(|a| objectives.iter().filter(|b| dominates(a, *b)).count())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub id: u64,
    pub genotype: Genotype,
    pub evaluation: EvaluationRecord,
    /// Dominance count relative to the pool it was last consolidated in.
    pub consolidated: usize,
}

impl Individual {
    pub fn new(id: u64, genotype: Genotype, evaluation: EvaluationRecord) -> Self {
        Self {
            id,
            genotype,
            evaluation,
            consolidated: 0,
        }
    }

    /// `(f1 flat, f1 tilted)`.
    pub fn objectives(&self) -> [f64; 2] {
        self.evaluation.objectives()
    }
}

/// Recomputes every member's dominance count within `pool`.
pub fn consolidate(pool: &mut [Individual]) {
    let objectives: Vec<[f64; 2]> = pool.iter().map(Individual::objectives).collect();
    for (ind, count) in pool.iter_mut().zip(dominance_counts(&objectives)) {
        ind.consolidated = count;
    }
}

/// Draws two members with replacement and returns the index of the one
/// with the higher dominance count, breaking ties with a coin flip.
///
/// # Panics
/// If `pool` is empty.
pub fn binary_tournament(pool: &[Individual], rng: &mut RandomStream) -> usize {
    let a = rng.below(pool.len());
    let b = rng.below(pool.len());
    match pool[a].consolidated.cmp(&pool[b].consolidated) {
        core::cmp::Ordering::Greater => a,
        core::cmp::Ordering::Less => b,
        core::cmp::Ordering::Equal => {
            if rng.coin() {
                a
            } else {
                b
            }
        }
    }
}

/// Evaluates a batch of genotypes, returning records in input order.
pub trait Evaluator {
    fn evaluate_batch(&self, genotypes: &[Genotype]) -> Vec<EvaluationRecord>;
}

/// Evaluates one genotype after another on the calling thread.
#[derive(Debug, Clone, Default)]
pub struct SeasonalEvaluator {
    pub development: DevelopmentConfig,
    pub sim: SimConfig,
}

impl SeasonalEvaluator {
    pub fn new(development: DevelopmentConfig, sim: SimConfig) -> Self {
        Self { development, sim }
    }
}

impl Evaluator for SeasonalEvaluator {
    fn evaluate_batch(&self, genotypes: &[Genotype]) -> Vec<EvaluationRecord> {
        genotypes
            .iter()
            .map(|g| evaluate_seasonal(g, &self.development, &self.sim))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub mu: usize,
    pub lambda: usize,
    pub generations: usize,
    pub variation: VariationConfig,
    pub development: DevelopmentConfig,
    pub sim: SimConfig,
    pub encoding: Encoding,
    pub seed: u64,
    pub repetitions: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            mu: 100,
            lambda: 100,
            generations: 200,
            variation: VariationConfig::default(),
            development: DevelopmentConfig::default(),
            sim: SimConfig::default(),
            encoding: Encoding::Plasticoding,
            seed: 0,
            repetitions: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvolutionConfigError {
    #[error("{name} must be at least 2, got {value}")]
    Population { name: &'static str, value: usize },
    #[error("repetitions must be at least 1")]
    Repetitions,
    #[error(transparent)]
    Variation(#[from] VariationError),
    #[error(transparent)]
    Development(#[from] DevelopmentConfigError),
    #[error(transparent)]
    Sim(#[from] SimConfigError),
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), EvolutionConfigError> {
        for (name, value) in [("mu", self.mu), ("lambda", self.lambda)] {
            if value < 2 {
                return Err(EvolutionConfigError::Population { name, value });
            }
        }
        if self.repetitions == 0 {
            return Err(EvolutionConfigError::Repetitions);
        }
        self.variation.validate()?;
        self.development.validate()?;
        self.sim.validate()?;
        Ok(())
    }

    /// Seed of repetition `r`.
    pub fn repetition_seed(&self, r: usize) -> u64 {
        self.seed.wrapping_add(r as u64)
    }

    /// Offspring evaluations a full run schedules.
    pub fn offspring_budget(&self) -> usize {
        self.generations * self.lambda
    }
}

/// Per-season population summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeasonStats {
    pub mean_f1: f64,
    pub max_f1: f64,
    /// Means in descriptor order: size, sensors, sensors reach, recurrence, speed, balance.
    pub descriptor_means: [f64; 6],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub flat: SeasonStats,
    pub tilted: SeasonStats,
    pub consolidated_mean: f64,
    pub consolidated_max: usize,
    /// Share of the population whose two seasonal phenotypes differ.
    pub plastic_fraction: f64,
}

fn season_stats<'a>(records: impl Iterator<Item = &'a crate::sim::SeasonRecord>) -> SeasonStats {
    let mut n = 0usize;
    let mut sum = 0.0;
    let mut max = f64::NEG_INFINITY;
    let mut means = [0.0; 6];
    for r in records {
        n += 1;
        sum += r.fitness;
        max = max.max(r.fitness);
        for (m, v) in means.iter_mut().zip(r.descriptors.values()) {
            *m += v;
        }
    }
    let n = n.max(1) as f64;
    for m in &mut means {
        *m /= n;
    }
    SeasonStats {
        mean_f1: sum / n,
        max_f1: max,
        descriptor_means: means,
    }
}

impl GenerationStats {
    pub fn of(generation: usize, pop: &[Individual]) -> Self {
        let n = pop.len().max(1) as f64;
        Self {
            generation,
            flat: season_stats(pop.iter().map(|i| &i.evaluation.flat)),
            tilted: season_stats(pop.iter().map(|i| &i.evaluation.tilted)),
            consolidated_mean: pop.iter().map(|i| i.consolidated as f64).sum::<f64>() / n,
            consolidated_max: pop.iter().map(|i| i.consolidated).max().unwrap_or(0),
            plastic_fraction: pop.iter().filter(|i| i.evaluation.is_plastic()).count() as f64 / n,
        }
    }
}

/// The member with the highest dominance count; ties go to the higher
/// summed fitness, then to the earlier member.
pub fn best(pop: &[Individual]) -> Option<&Individual> {
    let mut best: Option<&Individual> = None;
    for ind in pop {
        let better = match best {
            None => true,
            Some(b) => {
                let sum = |i: &Individual| i.objectives().iter().sum::<f64>();
                ind.consolidated > b.consolidated || (ind.consolidated == b.consolidated && sum(ind) > sum(b))
            }
        };
        if better {
            best = Some(ind);
        }
    }
    best
}

/// Random, evaluated and consolidated initial population of `mu` members.
pub fn initial_population<E: Evaluator + ?Sized>(
    cfg: &EvolutionConfig,
    evaluator: &E,
    rng: &mut RandomStream,
) -> Vec<Individual> {
    let genotypes: Vec<Genotype> = (0..cfg.mu)
        .map(|_| init_genotype(cfg.encoding, &cfg.variation, rng))
        .collect();
    let records = evaluator.evaluate_batch(&genotypes);
    let mut pop: Vec<Individual> = genotypes
        .into_iter()
        .zip(records)
        .enumerate()
        .map(|(i, (g, e))| Individual::new(i as u64, g, e))
        .collect();
    consolidate(&mut pop);
    pop
}

/// One generation: `lambda` children from tournament-selected parents,
/// then `mu` survivors drawn by tournament from parents plus children.
///
/// `generation` numbers from 1 and keys both the substreams and the ids
/// given to the children. Parents keep their cached evaluations.
pub fn run_generation<E: Evaluator + ?Sized>(
    pop: &[Individual],
    cfg: &EvolutionConfig,
    evaluator: &E,
    generation: usize,
    rng: &mut RandomStream,
) -> Vec<Individual> {
    let children: Vec<Genotype> = (0..cfg.lambda)
        .map(|i| {
            let a = binary_tournament(pop, rng);
            let b = binary_tournament(pop, rng);
            let mut child_rng = rng.derive(i as u64);
            let child = crossover(&pop[a].genotype, &pop[b].genotype, &cfg.variation, &mut child_rng)
                .expect("population shares one encoding");
            mutate(&child, &cfg.variation, &mut child_rng)
        })
        .collect();
    let records = evaluator.evaluate_batch(&children);
    debug_assert_eq!(records.len(), children.len());

    let first_id = (cfg.mu + generation.saturating_sub(1) * cfg.lambda) as u64;
    let mut pool: Vec<Individual> = pop.to_vec();
    pool.extend(
        children
            .into_iter()
            .zip(records)
            .enumerate()
            .map(|(i, (g, e))| Individual::new(first_id + i as u64, g, e)),
    );
    consolidate(&mut pool);

    let mut survivors: Vec<Individual> = (0..cfg.mu)
        .map(|_| pool[binary_tournament(&pool, rng)].clone())
        .collect();
    consolidate(&mut survivors);
    survivors
}

/// A single seeded repetition, advanced one generation at a time.
pub struct Evolution<'e, E: Evaluator + ?Sized> {
    cfg: EvolutionConfig,
    evaluator: &'e E,
    rng: RandomStream,
    population: Vec<Individual>,
    generation: usize,
    offspring_evaluations: usize,
}

impl<'e, E: Evaluator + ?Sized> Evolution<'e, E> {
    /// Validates `cfg` and builds the initial population from `seed`.
    pub fn new(cfg: EvolutionConfig, evaluator: &'e E, seed: u64) -> Result<Self, EvolutionConfigError> {
        cfg.validate()?;
        let root = RandomStream::new(seed);
        let mut init_rng = root.derive(0);
        let population = initial_population(&cfg, evaluator, &mut init_rng);
        Ok(Self {
            cfg,
            evaluator,
            rng: root,
            population,
            generation: 0,
            offspring_evaluations: 0,
        })
    }

    pub fn config(&self) -> &EvolutionConfig {
        &self.cfg
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    /// Generations completed so far.
    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn offspring_evaluations(&self) -> usize {
        self.offspring_evaluations
    }

    pub fn is_finished(&self) -> bool {
        self.generation >= self.cfg.generations
    }

    /// Runs the next generation and summarizes the new population.
    pub fn step(&mut self) -> GenerationStats {
        self.generation += 1;
        let mut rng = self.rng.derive(self.generation as u64);
        self.population = run_generation(&self.population, &self.cfg, self.evaluator, self.generation, &mut rng);
        self.offspring_evaluations += self.cfg.lambda;
        let stats = GenerationStats::of(self.generation, &self.population);
        log::debug!(
            "generation {}: max f1 flat {:.4}, tilted {:.4}",
            stats.generation,
            stats.flat.max_f1,
            stats.tilted.max_f1
        );
        stats
    }

    /// Runs all remaining generations, returning their summaries.
    pub fn run(&mut self) -> Vec<GenerationStats> {
        let mut out = Vec::with_capacity(self.cfg.generations.saturating_sub(self.generation));
        while !self.is_finished() {
            out.push(self.step());
        }
        out
    }

    pub fn into_population(self) -> Vec<Individual> {
        self.population
    }
}
