//! The r-valued compact genetic algorithm (r-cGA) on generalized OneMax.
//!
//! * [`model`]: the exact `n x r` frequency matrix, sampling and the `1/K` update.
//! * [`fitness`]: r-OneMax, G-OneMax and their arbitrary-optimum variants.
//! * [`algorithm`]: the main loop with termination, stagnation and tracing.
//! * [`analysis`]: step classification, drift bounds and Monte Carlo probes.
//! * [`harness`]: parameter sweeps, CSV and trace output, verification and the CLI.
//!
//! ```
//! use rcga::{run, FitnessFunction, ModelParams, RunConfig, RunStatus};
//!
//! let params = ModelParams::new(30, 3, 120)?;
//! let config = RunConfig::new(params, FitnessFunction::r_onemax(30, 3), 7);
//! let outcome = run(&config)?;
//! assert_eq!(outcome.evaluations, 2 * outcome.iterations);
//! assert_eq!(outcome.status, RunStatus::OptimumSampled);
//! # Ok::<(), rcga::Error>(())
//! ```

pub mod algorithm;
pub mod analysis;
pub mod error;
pub mod fitness;
pub mod harness;
pub mod model;

pub use algorithm::{run, run_from, step, RunConfig, RunOutcome, RunStatus, TraceLevel};
pub use error::{Error, Result};
pub use fitness::{Fitness, FitnessFamily, FitnessFunction};
pub use model::{FrequencyMatrix, Individual, ModelParams};

// the guide's snippets run as doc-tests
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/fitness.md")]
    mod fitness {}
    #[doc = include_str!("../../../book/src/algorithm.md")]
    mod algorithm {}
    #[doc = include_str!("../../../book/src/drift.md")]
    mod drift {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
