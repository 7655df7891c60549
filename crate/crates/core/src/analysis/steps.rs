//! Per-position step classification.
//!
//! For position `i`, `D_i` is the difference between the number of `r-1`
//! entries in `x` and in `y`, counted over all positions except `i`. Under
//! r-OneMax it decides whether position `i` can influence the swap:
//!
//! * `D_i = 1` or `|D_i| >= 2`: random-walk step, the change of
//!   `p_{i,r-1}` is `+1/K` or `-1/K` each with probability `p(1-p)`;
//! * `D_i in {-1, 0}`: biased step, the change is `+1/K` with probability
//!   `2p(1-p)` and `0` otherwise.

use std::fmt;

use crate::model::{CountDelta, Individual};

/// Exact potential `n - sum_i p_{i,r-1}`, held in units of `1/K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Potential {
    pub units: u64,
    pub k: u32,
}

impl Potential {
    pub fn value(&self) -> f64 {
        self.units as f64 / self.k as f64
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.value())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    RwStep,
    BiasedStep,
}

impl StepKind {
    pub fn classify(d: i64) -> Self {
        if d == 1 || d.abs() >= 2 {
            StepKind::RwStep
        } else {
            StepKind::BiasedStep
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PositionStep {
    pub d: i64,
    pub kind: StepKind,
}

/// One iteration of the r-cGA as observed by the instrumentation.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    /// Iteration index; the step maps the model at time `t` to time `t+1`.
    pub t: u64,
    /// First sample, before any swap.
    pub x: Individual,
    /// Second sample, before any swap.
    pub y: Individual,
    pub swapped: bool,
    pub fx: u64,
    pub fy: u64,
    pub per_position: Vec<PositionStep>,
    pub delta: Vec<CountDelta>,
    /// Potential after the update.
    pub phi: Potential,
}

impl StepRecord {
    /// The (winner, loser) pair that was passed to the update.
    pub fn winner_loser(&self) -> (&Individual, &Individual) {
        if self.swapped {
            (&self.y, &self.x)
        } else {
            (&self.x, &self.y)
        }
    }

    /// Net change of `counts[i][value]` in this step.
    pub fn count_change(&self, i: usize, value: u16) -> i64 {
        self.delta
            .iter()
            .filter(|d| d.position == i && d.value == value)
            .map(|d| d.change as i64)
            .sum()
    }
}

/// `D_i` for a single position.
pub fn compute_d(x: &Individual, y: &Individual, i: usize, top: u16) -> i64 {
    let count = |s: &Individual| {
        s.values()
            .iter()
            .enumerate()
            .filter(|&(j, &v)| j != i && v == top)
            .count() as i64
    };
    count(x) - count(y)
}

/// `D_i` for every position, in `O(n)`.
pub fn compute_d_all(x: &Individual, y: &Individual, top: u16) -> Vec<i64> {
    let hits = |s: &Individual| s.values().iter().filter(|&&v| v == top).count() as i64;
    let total = hits(x) - hits(y);
    x.values()
        .iter()
        .zip(y.values())
        .map(|(&a, &b)| total - (a == top) as i64 + (b == top) as i64)
        .collect()
}

/// Tags every position as a random-walk or biased step.
pub fn classify_step(x: &Individual, y: &Individual, top: u16) -> Vec<PositionStep> {
    compute_d_all(x, y, top)
        .into_iter()
        .map(|d| PositionStep {
            d,
            kind: StepKind::classify(d),
        })
        .collect()
}
