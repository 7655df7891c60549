//! Instrumentation of the r-cGA on r-OneMax: step classification, the
//! closed-form drift bounds, exact distributions of `D_i`, and Monte Carlo
//! probes comparing them with simulated runs.

mod bounds;
mod poisson;
pub mod probes;
mod report;
mod steps;

pub use bounds::*;
pub use poisson::*;
pub use report::{Report, Table};
pub use steps::*;

use crate::model::FrequencyMatrix;

/// `n - sum_i p_{i,r-1}`, exact in units of `1/K`.
pub fn compute_potential(model: &FrequencyMatrix) -> Potential {
    let params = model.params();
    let top = params.r() - 1;
    let hits: u64 = model.rows().map(|row| row[top] as u64).sum();
    Potential {
        units: params.n() as u64 * params.k() as u64 - hits,
        k: params.k(),
    }
}
