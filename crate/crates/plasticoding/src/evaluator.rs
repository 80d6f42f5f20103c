//! Parallel population evaluation.

use plasticoding_core::development::DevelopmentConfig;
use plasticoding_core::evolution::Evaluator;
use plasticoding_core::sim::{evaluate_seasonal, EvaluationRecord, SimConfig};
use plasticoding_core::Genotype;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

/// Evaluates batches on a dedicated thread pool; results keep input order.
pub struct ParallelEvaluator {
    development: DevelopmentConfig,
    sim: SimConfig,
    pool: ThreadPool,
}

impl ParallelEvaluator {
    /// `threads = None` sizes the pool to the machine.
    pub fn new(development: DevelopmentConfig, sim: SimConfig, threads: Option<usize>) -> Result<Self, ThreadPoolBuildError> {
        let mut builder = ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n);
        }
        Ok(Self {
            development,
            sim,
            pool: builder.build()?,
        })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Evaluator for ParallelEvaluator {
    fn evaluate_batch(&self, genotypes: &[Genotype]) -> Vec<EvaluationRecord> {
        self.pool.install(|| {
            genotypes
                .par_iter()
                .map(|g| evaluate_seasonal(g, &self.development, &self.sim))
                .collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use plasticoding_core::evolution::SeasonalEvaluator;
    use plasticoding_core::variation::init_genotype;
    use plasticoding_core::{Encoding, RandomStream, VariationConfig};

    #[test]
    fn matches_sequential_evaluation_in_order() {
        let mut rng = RandomStream::new(3);
        let gs: Vec<Genotype> = (0..24)
            .map(|_| init_genotype(Encoding::Plasticoding, &VariationConfig::default(), &mut rng))
            .collect();
        let sim = SimConfig {
            season_duration: 5.0,
            ..Default::default()
        };
        let par = ParallelEvaluator::new(DevelopmentConfig::default(), sim.clone(), Some(4)).unwrap();
        let seq = SeasonalEvaluator::new(DevelopmentConfig::default(), sim);
        assert_eq!(par.evaluate_batch(&gs), seq.evaluate_batch(&gs));
        assert_eq!(par.threads(), 4);
    }
}
