//! Deterministic surrogate locomotion model and the seasonal evaluation.
//!
//! Each step, every oscillator's change in output is modulated by the
//! contact signal of the sensors wired to it and by its recurrent edge,
//! then pushed through a ratchet: forward swings move the robot by
//! `thrust_gain` per unit, backward swings pull it back by `backslip` of
//! that. On the incline a drag proportional to module count is subtracted.
//! Head pitch and roll follow the mean deflection of the vertical and
//! horizontal joints.

use alloc::vec;
use alloc::vec::Vec;

use crate::clause::EnvironmentState;
use crate::development::{develop, DevelopmentConfig};
use crate::evolution::fitness_f1;
use crate::genotype::Genotype;
use crate::phenotype::{
    descriptor_recurrence, descriptor_sensors, descriptor_sensors_reach, descriptor_size, oscillator_output,
    JointAxis, Phenotype,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Step length in seconds.
    pub dt: f64,
    /// Length of one season in seconds.
    pub season_duration: f64,
    /// Floor inclination in degrees when inclined.
    pub tilt_angle: f64,
    /// Displacement (cm) per unit of forward oscillator swing.
    pub thrust_gain: f64,
    /// Fraction of a backward swing that moves the robot back.
    pub backslip: f64,
    /// Drag on the incline, cm/s per module per degree.
    pub slope_drag: f64,
    /// Head rotation (degrees) per unit of mean joint deflection.
    pub rotation_gain: f64,
    /// Period, in steps, of the synthetic touch signal.
    pub sensor_contact_period: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            season_duration: 50.0,
            tilt_angle: 5.0,
            thrust_gain: 0.5,
            backslip: 0.3,
            slope_drag: 0.02,
            rotation_gain: 30.0,
            sensor_contact_period: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimConfigError {
    #[error("dt must be positive, got {0}")]
    Step(f64),
    #[error("season_duration {duration} is not a whole number of {dt} steps")]
    Duration { duration: f64, dt: f64 },
    #[error("backslip must lie in [0, 1), got {0}")]
    Backslip(f64),
    #[error("sensor_contact_period must be at least 1")]
    ContactPeriod,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimConfigError> {
        if self.dt.is_nan() || self.dt <= 0.0 {
            return Err(SimConfigError::Step(self.dt));
        }
        let ratio = self.season_duration / self.dt;
        if ratio.is_nan() || ratio < 1.0 || libm::fabs(ratio - libm::round(ratio)) > 1e-9 * ratio.max(1.0) {
            return Err(SimConfigError::Duration {
                duration: self.season_duration,
                dt: self.dt,
            });
        }
        if !(0.0..1.0).contains(&self.backslip) {
            return Err(SimConfigError::Backslip(self.backslip));
        }
        if self.sensor_contact_period == 0 {
            return Err(SimConfigError::ContactPeriod);
        }
        Ok(())
    }

    /// Steps per season.
    pub fn steps(&self) -> usize {
        libm::round(self.season_duration / self.dt) as usize
    }

    /// Touch signal at step `t` (1-based): on for the first half of each period.
    pub fn contact(&self, t: usize) -> f64 {
        let p = self.sensor_contact_period;
        if (t - 1) % p < p / 2 {
            1.0
        } else {
            0.0
        }
    }
}

/// Per-step record of one season.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorTrace {
    /// Center-of-mass x in cm; `steps + 1` samples starting at 0.
    pub x_positions: Vec<f64>,
    /// Head roll in degrees, one per step.
    pub rolls: Vec<f64>,
    /// Head pitch in degrees, one per step.
    pub pitches: Vec<f64>,
    /// Raw oscillator outputs, `[step][neuron]`.
    pub oscillator_outputs: Vec<Vec<f64>>,
}

fn ratchet(z: f64, backslip: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        backslip * z
    }
}

/// Simulates one season of a developed robot.
pub fn simulate_season(p: &Phenotype, env: &EnvironmentState, cfg: &SimConfig) -> BehaviorTrace {
    let steps = cfg.steps();
    let net = &p.controller;
    let neurons = net.neurons();
    let size = descriptor_size(&p.morphology) as f64;
    let slope = if env.inclined() {
        cfg.slope_drag * size * cfg.tilt_angle * cfg.dt
    } else {
        0.0
    };
    let vertical = neurons.iter().filter(|n| n.axis == JointAxis::Vertical).count();
    let horizontal = neurons.len() - vertical;

    let output = |t: usize| -> Vec<f64> {
        let time = t as f64 * cfg.dt;
        neurons
            .iter()
            .map(|n| oscillator_output(n.amplitude, n.period, n.offset, time))
            .collect()
    };
    // sum of incoming edge weights per neuron; every sensor shares one contact signal
    let incoming: Vec<f64> = neurons
        .iter()
        .map(|n| n.edges().iter().map(|e| net.edge(*e).weight).sum())
        .collect();

    let mut trace = BehaviorTrace {
        x_positions: Vec::with_capacity(steps + 1),
        rolls: Vec::with_capacity(steps),
        pitches: Vec::with_capacity(steps),
        oscillator_outputs: Vec::with_capacity(steps),
    };
    let mut x = 0.0;
    trace.x_positions.push(x);
    let mut previous = output(0);
    let mut previous_swing = vec![0.0; neurons.len()];
    for t in 1..=steps {
        let current = output(t);
        let contact = cfg.contact(t);
        let mut thrust = 0.0;
        let (mut pitch, mut roll) = (0.0, 0.0);
        for (j, n) in neurons.iter().enumerate() {
            let delta = current[j] - previous[j];
            let gain = (1.0 + incoming[j] * contact).max(0.0);
            let mut swing = delta * gain;
            if let Some(w) = n.recurrent {
                swing += w * previous_swing[j];
            }
            previous_swing[j] = swing;
            thrust += ratchet(swing, cfg.backslip);
            match n.axis {
                JointAxis::Vertical => pitch += current[j] - 0.5,
                JointAxis::Horizontal => roll += current[j] - 0.5,
            }
        }
        x += cfg.thrust_gain * thrust - slope;
        trace.x_positions.push(x);
        let scale = |sum: f64, count: usize| (cfg.rotation_gain * sum / count.max(1) as f64).clamp(-180.0, 180.0);
        trace.pitches.push(scale(pitch, vertical));
        trace.rolls.push(scale(roll, horizontal));
        trace.oscillator_outputs.push(current.clone());
        previous = current;
    }
    trace
}

/// Speed along x: `(end - start) / duration`.
pub fn speed(trace: &BehaviorTrace, duration: f64) -> f64 {
    let (Some(b), Some(e)) = (trace.x_positions.first(), trace.x_positions.last()) else {
        return 0.0;
    };
    (e - b) / duration
}

/// `1 - (Σ|roll| + Σ|pitch|) / (T · 180 · 2)` with `T` the number of
/// rotation samples.
pub fn balance(trace: &BehaviorTrace) -> f64 {
    let samples = trace.rolls.len().max(trace.pitches.len());
    if samples == 0 {
        return 1.0;
    }
    let r: f64 = trace.rolls.iter().map(|v| v.abs()).sum();
    let p: f64 = trace.pitches.iter().map(|v| v.abs()).sum();
    1.0 - (r + p) / (samples as f64 * 180.0 * 2.0)
}

pub const DESCRIPTOR_NAMES: [&str; 6] = ["size", "sensors", "sensors_reach", "recurrence", "speed", "balance"];

/// Static and behavioral descriptors of one robot in one season.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Descriptors {
    pub size: usize,
    pub sensors: f64,
    pub sensors_reach: f64,
    pub recurrence: f64,
    pub speed: f64,
    pub balance: f64,
}

impl Descriptors {
    /// Values in [`DESCRIPTOR_NAMES`] order.
    pub fn values(&self) -> [f64; 6] {
        [
            self.size as f64,
            self.sensors,
            self.sensors_reach,
            self.recurrence,
            self.speed,
            self.balance,
        ]
    }
}

/// Descriptors from a phenotype and its trace.
pub fn describe(p: &Phenotype, trace: &BehaviorTrace, duration: f64) -> Descriptors {
    Descriptors {
        size: descriptor_size(&p.morphology),
        sensors: descriptor_sensors(&p.morphology),
        sensors_reach: descriptor_sensors_reach(&p.controller),
        recurrence: descriptor_recurrence(&p.controller),
        speed: speed(trace, duration),
        balance: balance(trace),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeasonRecord {
    pub phenotype: Phenotype,
    pub descriptors: Descriptors,
    pub fitness: f64,
}

/// Outcome of one robot's lifetime: a flat season then a tilted one.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRecord {
    pub flat: SeasonRecord,
    pub tilted: SeasonRecord,
}

impl EvaluationRecord {
    /// `(f1 flat, f1 tilted)`.
    pub fn objectives(&self) -> [f64; 2] {
        [self.flat.fitness, self.tilted.fitness]
    }

    /// Whether the two seasons expressed different phenotypes.
    pub fn is_plastic(&self) -> bool {
        self.flat.phenotype != self.tilted.phenotype
    }
}

/// Develops and simulates one season.
pub fn evaluate_season(
    g: &Genotype,
    env: &EnvironmentState,
    dev: &DevelopmentConfig,
    sim: &SimConfig,
) -> (SeasonRecord, BehaviorTrace) {
    let phenotype = develop(g, env, dev)
        .expect("validated genotypes only reference registered states")
        .phenotype;
    let trace = simulate_season(&phenotype, env, sim);
    let descriptors = describe(&phenotype, &trace, sim.season_duration);
    let record = SeasonRecord {
        fitness: fitness_f1(descriptors.speed),
        phenotype,
        descriptors,
    };
    (record, trace)
}

/// Seasonal lifetime: develop and simulate on the flat floor, then develop
/// again and simulate from a fresh start on the incline.
pub fn evaluate_seasonal(g: &Genotype, dev: &DevelopmentConfig, sim: &SimConfig) -> EvaluationRecord {
    let (flat, _) = evaluate_season(g, &EnvironmentState::flat(), dev, sim);
    let (tilted, _) = evaluate_season(g, &EnvironmentState::tilted(), dev, sim);
    EvaluationRecord { flat, tilted }
}
