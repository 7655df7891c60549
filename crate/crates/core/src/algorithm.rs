//! The r-cGA main loop.
//!
//! Each iteration samples `x` and `y` independently from the model, swaps
//! them if `f(x) < f(y)` (ties keep `x` as the winner) and moves `1/K` of
//! mass towards the winner at every position where the two differ.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{classify_step, compute_potential, Potential, StepRecord};
use crate::error::{Error, Result};
use crate::fitness::{Fitness, FitnessFunction};
use crate::model::{CountDelta, FrequencyMatrix, Individual, ModelParams};

/// The generator used for every run. Seeded from a single `u64`.
pub type RandomSource = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> RandomSource {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TraceLevel {
    #[default]
    Off,
    /// One [`StepSummary`] per iteration.
    Summary,
    /// One full [`StepRecord`] per iteration.
    Full,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: ModelParams,
    pub fitness: FitnessFunction,
    pub max_iterations: u64,
    pub seed: u64,
    pub trace_level: TraceLevel,
    /// Stop as soon as the maximum is provably unreachable.
    pub stagnation_check: bool,
}

impl RunConfig {
    /// Defaults: iteration cap from [`default_max_iterations`], tracing off,
    /// stagnation check on.
    pub fn new(params: ModelParams, fitness: FitnessFunction, seed: u64) -> Self {
        Self {
            params,
            max_iterations: default_max_iterations(params),
            fitness,
            seed,
            trace_level: TraceLevel::Off,
            stagnation_check: true,
        }
    }

    pub fn with_max_iterations(mut self, max_iterations: u64) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_trace(mut self, level: TraceLevel) -> Self {
        self.trace_level = level;
        self
    }

    pub fn with_stagnation_check(mut self, on: bool) -> Self {
        self.stagnation_check = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidParams(
                "max_iterations must be at least 1".into(),
            ));
        }
        if self.fitness.n() != self.params.n() || self.fitness.r() != self.params.r() {
            return Err(Error::InvalidParams(format!(
                "fitness is defined for n={}, r={} but the model has n={}, r={}",
                self.fitness.n(),
                self.fitness.r(),
                self.params.n(),
                self.params.r()
            )));
        }
        Ok(())
    }
}

/// `50 K sqrt(n) (1 + log2 r) (1 + log2 n)`, rounded up.
pub fn default_max_iterations(params: ModelParams) -> u64 {
    let (n, r, k) = (params.n() as f64, params.r() as f64, params.k() as f64);
    (50.0 * k * n.sqrt() * (1.0 + r.log2()) * (1.0 + n.log2())).ceil() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RunStatus {
    OptimumSampled,
    IterationCapReached,
    Stagnated,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::OptimumSampled => "optimum-sampled",
            RunStatus::IterationCapReached => "iteration-cap-reached",
            RunStatus::Stagnated => "stagnated",
        }
    }
}

/// The per-iteration line of a summary trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepSummary {
    pub t: u64,
    pub fx: u64,
    pub fy: u64,
    pub swapped: bool,
    pub phi: Potential,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Trace {
    Summary(Vec<StepSummary>),
    Full(Vec<StepRecord>),
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub iterations: u64,
    /// Always `2 * iterations`.
    pub evaluations: u64,
    pub final_model: FrequencyMatrix,
    pub trace: Option<Trace>,
}

/// Runs the r-cGA from the uniform model.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let model = FrequencyMatrix::init_uniform(config.params);
    run_from(config, model)
}

/// Runs the r-cGA from a given model, e.g. a pre-seeded one.
///
/// The iteration that samples a maximizer is counted; its update is not
/// applied. Stagnation and the cap are checked after each update.
pub fn run_from(config: &RunConfig, mut model: FrequencyMatrix) -> Result<RunOutcome> {
    config.validate()?;
    if model.params() != config.params {
        return Err(Error::InvalidParams(
            "model dimensions differ from the run configuration".into(),
        ));
    }
    let fitness = &config.fitness;
    let params = config.params;
    let top = params.top();
    let mut rng = rng_from_seed(config.seed);

    // value each position needs for the maximum; NO_REQUIREMENT never matches
    let watched: Vec<u16> = (0..params.n())
        .map(|i| fitness.required_value(i).unwrap_or(NO_REQUIREMENT))
        .collect();
    let mut unreachable = watched
        .iter()
        .enumerate()
        .filter(|&(i, &v)| v != NO_REQUIREMENT && model.count(i, v as usize) == 0)
        .count();
    let full_trace = config.trace_level == TraceLevel::Full;

    let mut phi = compute_potential(&model);
    let mut trace = match config.trace_level {
        TraceLevel::Off => None,
        TraceLevel::Summary => Some(Trace::Summary(Vec::new())),
        TraceLevel::Full => Some(Trace::Full(Vec::new())),
    };

    let mut x = Individual::constant(params.n(), 0);
    let mut y = Individual::constant(params.n(), 0);
    let mut deltas: Vec<CountDelta> = Vec::new();
    let max_value = fitness.max_value();
    let mut t = 0u64;

    let status = loop {
        model.sample_into(&mut rng, &mut x);
        model.sample_into(&mut rng, &mut y);
        let fx = fitness.evaluate(&x);
        let fy = fitness.evaluate(&y);
        let swapped = fx < fy;
        let found = fx == max_value || fy == max_value;

        deltas.clear();
        if !found {
            let (winner, loser) = if swapped { (&y, &x) } else { (&x, &y) };
            if full_trace {
                model.update_with(winner, loser, |d| deltas.push(d));
                unreachable += deltas
                    .iter()
                    .filter(|d| {
                        d.change < 0
                            && watched[d.position] == d.value
                            && model.count(d.position, d.value as usize) == 0
                    })
                    .count();
            } else {
                unreachable += model.update_tracking(winner, loser, Some(&watched));
            }
            phi.units = phi.units + top_count(loser, top) - top_count(winner, top);
        }

        match &mut trace {
            None => {}
            Some(Trace::Summary(rows)) => rows.push(StepSummary {
                t,
                fx,
                fy,
                swapped,
                phi,
            }),
            Some(Trace::Full(rows)) => rows.push(StepRecord {
                t,
                per_position: classify_step(&x, &y, top),
                x: x.clone(),
                y: y.clone(),
                swapped,
                fx,
                fy,
                delta: deltas.clone(),
                phi,
            }),
        }

        t += 1;
        if found {
            break RunStatus::OptimumSampled;
        }
        if config.stagnation_check && unreachable > 0 {
            break RunStatus::Stagnated;
        }
        if t >= config.max_iterations {
            break RunStatus::IterationCapReached;
        }
    };
    debug_assert_eq!(phi, compute_potential(&model));

    Ok(RunOutcome {
        status,
        iterations: t,
        evaluations: 2 * t,
        final_model: model,
        trace,
    })
}

const NO_REQUIREMENT: u16 = u16::MAX;

fn top_count(x: &Individual, top: u16) -> u64 {
    x.values().iter().map(|&v| (v == top) as u64).sum()
}

/// Performs one iteration with fresh samples and returns its full record.
pub fn step<F: Fitness + ?Sized, R: Rng + ?Sized>(
    model: &mut FrequencyMatrix,
    fitness: &F,
    rng: &mut R,
    t: u64,
) -> StepRecord {
    let x = model.sample(rng);
    let y = model.sample(rng);
    step_with_samples(model, fitness, x, y, t)
}

/// One iteration on given samples `x` and `y` (in sampling order).
pub fn step_with_samples<F: Fitness + ?Sized>(
    model: &mut FrequencyMatrix,
    fitness: &F,
    x: Individual,
    y: Individual,
    t: u64,
) -> StepRecord {
    let top = model.params().top();
    let fx = fitness.evaluate(&x);
    let fy = fitness.evaluate(&y);
    let swapped = fx < fy;
    let mut delta = Vec::new();
    {
        let (winner, loser) = if swapped { (&y, &x) } else { (&x, &y) };
        model.update_with(winner, loser, |d| delta.push(d));
    }
    StepRecord {
        t,
        per_position: classify_step(&x, &y, top),
        x,
        y,
        swapped,
        fx,
        fy,
        delta,
        phi: compute_potential(model),
    }
}

/// Advances the model by `steps` iterations without termination checks,
/// calling `observe` after every update. Used by the drift probes.
pub(crate) fn evolve<F, R, O>(
    model: &mut FrequencyMatrix,
    fitness: &F,
    rng: &mut R,
    steps: u64,
    mut observe: O,
) where
    F: Fitness + ?Sized,
    R: Rng + ?Sized,
    O: FnMut(&FrequencyMatrix),
{
    let n = model.params().n();
    let mut x = Individual::constant(n, 0);
    let mut y = Individual::constant(n, 0);
    for _ in 0..steps {
        model.sample_into(rng, &mut x);
        model.sample_into(rng, &mut y);
        if fitness.evaluate(&x) < fitness.evaluate(&y) {
            model.update(&y, &x);
        } else {
            model.update(&x, &y);
        }
        observe(model);
    }
}
