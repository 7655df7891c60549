use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::seed::derive_trial_seed;
use crate::algorithm::{default_max_iterations, run, RunConfig, RunStatus};
use crate::error::{Error, Result};
use crate::fitness::{FitnessFamily, FitnessFunction};
use crate::model::ModelParams;

/// A grid cell `(r, K)`.
pub type Cell = (usize, u32);

/// Salt separating the optimum stream of the `*-at` families from the run stream.
const OPTIMUM_SALT: u64 = 0x6F70_7469_6D75_6D21;

/// Inclusive range `start..=end` with a positive stride, written `a:b:s`
/// (`a:b` means stride 1, `a` a single value).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KRange {
    pub start: u32,
    pub end: u32,
    pub stride: u32,
}

impl KRange {
    pub fn new(start: u32, end: u32, stride: u32) -> Result<Self> {
        if start == 0 || stride == 0 || end < start {
            return Err(Error::InvalidParams(format!(
                "K range needs 1 <= start <= end and stride >= 1 (got {start}:{end}:{stride})"
            )));
        }
        Ok(Self { start, end, stride })
    }

    pub fn single(k: u32) -> Result<Self> {
        Self::new(k, k, 1)
    }

    pub fn values(&self) -> impl Iterator<Item = u32> {
        (self.start..=self.end).step_by(self.stride as usize)
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.stride)
    }
}

impl FromStr for KRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<u32> = s
            .split(':')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad K range {s:?}: expected a:b:s")))
            })
            .collect::<Result<_>>()?;
        match parts[..] {
            [k] => Self::single(k),
            [a, b] => Self::new(a, b, 1),
            [a, b, s] => Self::new(a, b, s),
            _ => Err(Error::Parse(format!("bad K range {s:?}: expected a:b:s"))),
        }
    }
}

/// Iteration cap of each run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IterationCap {
    /// [`default_max_iterations`] of the cell.
    #[default]
    Default,
    Fixed(u64),
}

impl IterationCap {
    pub fn resolve(&self, params: ModelParams) -> u64 {
        match *self {
            IterationCap::Default => default_max_iterations(params),
            IterationCap::Fixed(cap) => cap,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub n: usize,
    pub r_list: Vec<usize>,
    pub k_range: KRange,
    pub family: FitnessFamily,
    pub repetitions: usize,
    pub master_seed: u64,
    pub max_iterations: IterationCap,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidParams(
                "repetitions must be at least 1".into(),
            ));
        }
        if self.r_list.is_empty() {
            return Err(Error::InvalidParams("no alphabet sizes given".into()));
        }
        if let Some(r) = self.r_list.iter().find(|&&r| r < 2) {
            return Err(Error::InvalidParams(format!("alphabet size {r} < 2")));
        }
        Ok(())
    }

    /// Cells in canonical order (by r, then K), split into runnable and
    /// skipped `(r, K)` pairs.
    pub fn cells(&self) -> (Vec<Cell>, Vec<Cell>) {
        let mut run = Vec::new();
        let mut skipped = Vec::new();
        let mut rs = self.r_list.clone();
        rs.sort_unstable();
        rs.dedup();
        for r in rs {
            for k in self.k_range.values() {
                if k % r as u32 == 0 {
                    run.push((r, k));
                } else {
                    skipped.push((r, k));
                }
            }
        }
        (run, skipped)
    }
}

/// Aggregate of one `(r, K)` cell. Means are over successful runs only.
#[derive(Clone, Debug, PartialEq)]
pub struct CellResult {
    pub r: usize,
    pub k: u32,
    pub repetitions: usize,
    pub success_count: usize,
    pub stagnation_count: usize,
    pub cap_count: usize,
    /// `None` when no run sampled the optimum.
    pub mean_iterations: Option<f64>,
    /// Sample standard deviation; `0` for a single success.
    pub std_iterations: Option<f64>,
}

impl CellResult {
    pub fn from_outcomes(r: usize, k: u32, outcomes: &[(RunStatus, u64)]) -> Self {
        let successes: Vec<f64> = outcomes
            .iter()
            .filter(|(s, _)| *s == RunStatus::OptimumSampled)
            .map(|&(_, it)| it as f64)
            .collect();
        let count = |status| outcomes.iter().filter(|(s, _)| *s == status).count();
        let (mean, std) = if successes.is_empty() {
            (None, None)
        } else {
            let m = successes.iter().sum::<f64>() / successes.len() as f64;
            let s = if successes.len() > 1 {
                let var = successes.iter().map(|v| (v - m).powi(2)).sum::<f64>()
                    / (successes.len() - 1) as f64;
                var.sqrt()
            } else {
                0.0
            };
            (Some(m), Some(s))
        };
        Self {
            r,
            k,
            repetitions: outcomes.len(),
            success_count: successes.len(),
            stagnation_count: count(RunStatus::Stagnated),
            cap_count: count(RunStatus::IterationCapReached),
            mean_iterations: mean,
            std_iterations: std,
        }
    }

    pub fn success_rate(&self) -> f64 {
        self.success_count as f64 / self.repetitions as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    /// Canonical order: by r, then K.
    pub cells: Vec<CellResult>,
    pub skipped: Vec<Cell>,
}

impl SweepResult {
    pub fn r_values(&self) -> Vec<usize> {
        let mut rs: Vec<usize> = self.cells.iter().map(|c| c.r).collect();
        rs.dedup();
        rs
    }

    pub fn series(&self, r: usize) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(move |c| c.r == r)
    }

    /// Cell with the smallest mean among cells with at least one success.
    pub fn minimizer(&self, r: usize) -> Option<&CellResult> {
        self.series(r)
            .filter(|c| c.mean_iterations.is_some())
            .min_by(|a, b| a.mean_iterations.partial_cmp(&b.mean_iterations).unwrap())
    }

    pub fn cell(&self, r: usize, k: u32) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.r == r && c.k == k)
    }
}

/// Configuration of trial `trial` of cell `(r, K)`.
pub fn trial_config(spec: &SweepSpec, r: usize, k: u32, trial: usize) -> Result<RunConfig> {
    let params = ModelParams::new(spec.n, r, k)?;
    let seed = derive_trial_seed(spec.master_seed, r as u64, k as u64, trial as u64);
    let optimum_seed = derive_trial_seed(
        spec.master_seed ^ OPTIMUM_SALT,
        r as u64,
        k as u64,
        trial as u64,
    );
    let fitness = FitnessFunction::from_family(spec.family, spec.n, r, optimum_seed);
    Ok(RunConfig::new(params, fitness, seed)
        .with_max_iterations(spec.max_iterations.resolve(params)))
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    sweep_with_progress(spec, |_| {})
}

/// Runs the cells one after another, the trials of each cell in parallel on
/// the current rayon pool; `on_cell` sees every finished cell in order.
pub fn sweep_with_progress(
    spec: &SweepSpec,
    mut on_cell: impl FnMut(&CellResult),
) -> Result<SweepResult> {
    spec.validate()?;
    let (cells, skipped) = spec.cells();
    if cells.is_empty() {
        return Err(Error::EmptyResult(format!(
            "no K in {} is a multiple of any r in {:?}",
            spec.k_range, spec.r_list
        )));
    }
    let mut results = Vec::with_capacity(cells.len());
    for (r, k) in cells {
        let outcomes = (0..spec.repetitions)
            .into_par_iter()
            .map(|trial| {
                let outcome = run(&trial_config(spec, r, k, trial)?)?;
                Ok((outcome.status, outcome.iterations))
            })
            .collect::<Result<Vec<_>>>()?;
        let cell = CellResult::from_outcomes(r, k, &outcomes);
        on_cell(&cell);
        results.push(cell);
    }
    Ok(SweepResult {
        spec: spec.clone(),
        cells: results,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(r_list: Vec<usize>, k: &str, reps: usize) -> SweepSpec {
        SweepSpec {
            n: 8,
            r_list,
            k_range: k.parse().unwrap(),
            family: FitnessFamily::ROneMax,
            repetitions: reps,
            master_seed: 1,
            max_iterations: IterationCap::Default,
        }
    }

    #[test]
    fn parses_ranges() {
        assert_eq!(
            "52:1000:4".parse::<KRange>().unwrap(),
            KRange::new(52, 1000, 4).unwrap()
        );
        assert_eq!(
            "30".parse::<KRange>().unwrap().values().collect::<Vec<_>>(),
            vec![30]
        );
        assert_eq!("10:12".parse::<KRange>().unwrap().values().count(), 3);
        assert!("10:5:1".parse::<KRange>().is_err());
        assert!("10:20:0".parse::<KRange>().is_err());
        assert!("a:b".parse::<KRange>().is_err());
        assert!("1:2:3:4".parse::<KRange>().is_err());
    }

    #[test]
    fn indivisible_cells_are_skipped() {
        let s = spec(vec![3, 4], "96:100:4", 2);
        let (run, skipped) = s.cells();
        assert_eq!(run, vec![(3, 96), (4, 96), (4, 100)]);
        assert_eq!(skipped, vec![(3, 100)]);
        let res = sweep(&s).unwrap();
        assert_eq!(res.skipped, vec![(3, 100)]);
        assert!(res.cell(3, 100).is_none());
    }

    #[test]
    fn empty_cell_set_is_an_error() {
        assert!(matches!(
            sweep(&spec(vec![3], "100", 2)),
            Err(Error::EmptyResult(_))
        ));
    }

    #[test]
    fn single_repetition_mean_is_that_run() {
        let s = spec(vec![2], "40", 1);
        let res = sweep(&s).unwrap();
        let expected = run(&trial_config(&s, 2, 40, 0).unwrap()).unwrap();
        let cell = &res.cells[0];
        assert_eq!(
            cell.success_count + cell.stagnation_count + cell.cap_count,
            1
        );
        if expected.status == RunStatus::OptimumSampled {
            assert_eq!(cell.mean_iterations, Some(expected.iterations as f64));
            assert_eq!(cell.std_iterations, Some(0.0));
        } else {
            assert_eq!(cell.mean_iterations, None);
        }
    }

    #[test]
    fn accounting_adds_up() {
        let res = sweep(&spec(vec![2, 3], "6:24:6", 12)).unwrap();
        for c in &res.cells {
            assert_eq!(
                c.success_count + c.stagnation_count + c.cap_count,
                c.repetitions
            );
        }
        assert_eq!(res.r_values(), vec![2, 3]);
    }

    #[test]
    fn all_failed_cell_has_no_mean() {
        let outcomes = [
            (RunStatus::Stagnated, 5),
            (RunStatus::IterationCapReached, 9),
        ];
        let c = CellResult::from_outcomes(3, 9, &outcomes);
        assert_eq!(c.mean_iterations, None);
        assert_eq!(c.success_rate(), 0.0);
        assert_eq!((c.stagnation_count, c.cap_count), (1, 1));
    }

    #[test]
    fn at_variants_draw_per_trial_optima() {
        let mut s = spec(vec![3], "30", 2);
        s.family = FitnessFamily::GOneMaxAt;
        let a = trial_config(&s, 3, 30, 0).unwrap().fitness.optimum();
        let b = trial_config(&s, 3, 30, 1).unwrap().fitness.optimum();
        assert_ne!(a, b);
        assert_eq!(a, trial_config(&s, 3, 30, 0).unwrap().fitness.optimum());
    }
}
