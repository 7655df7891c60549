//! Monte Carlo probes comparing simulated r-cGA runs with the drift bounds.
//!
//! Trials run on the rayon pool with seeds from
//! [`derive_trial_seed`](crate::harness::derive_trial_seed); results are
//! folded in trial order, so every report is a function of its inputs only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bounds::{collision_probability_bound, concentration_tail, potential_drift_bound};
use super::poisson::{
    biased_step_probability, exact_collision_probability, expected_potential_drop,
};
use super::report::{Report, Table};
use super::{compute_potential, StepKind};
use crate::algorithm::{evolve, rng_from_seed, step};
use crate::error::{Error, Result};
use crate::fitness::{FitnessFunction, NeutralROneMax};
use crate::harness::derive_trial_seed;
use crate::model::{FrequencyMatrix, ModelParams};

/// Default number of standard errors allowed for mean tests.
pub const MEAN_SIGMAS: f64 = 4.0;
/// Default significance level for distributional tests.
pub const DISTRIBUTION_ALPHA: f64 = 1e-3;

fn mean_and_se(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    if n == 0.0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn within_sigmas(value: f64, expected: f64, se: f64, sigmas: f64) -> bool {
    let dev = (value - expected).abs();
    if se == 0.0 {
        dev < 1e-12
    } else {
        dev <= sigmas * se
    }
}

fn fmt_f(v: f64) -> String {
    format!("{v:.6e}")
}

// ---------------------------------------------------------------------------
// neutral position

/// Runs the r-cGA on r-OneMax with one position made neutral and watches the
/// frequencies of that position.
#[derive(Clone, Debug, PartialEq)]
pub struct MartingaleProbe {
    pub n: usize,
    pub r: usize,
    pub k: u32,
    pub neutral_position: usize,
    pub steps: u64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MartingaleReport {
    pub probe: MartingaleProbe,
    /// Mean of `p^(T) - p^(0)` per value `j`.
    pub mean_drift: Vec<f64>,
    pub std_error: Vec<f64>,
    /// Fraction of trials with `max_t |p^(t) - p^(0)| >= 1/(2r)`, per value.
    pub exceedance_rate: Vec<f64>,
    /// Closed-form upper bound on each exceedance probability.
    pub bound: f64,
}

impl MartingaleReport {
    /// `|mean drift| <= sigmas * SE` for every value.
    pub fn drift_ok(&self, sigmas: f64) -> bool {
        self.mean_drift
            .iter()
            .zip(&self.std_error)
            .all(|(&m, &se)| within_sigmas(m, 0.0, se, sigmas))
    }

    /// Exceedance rate of value `j` may exceed the bound by at most
    /// `sigmas` binomial standard errors.
    pub fn exceedance_allowance(&self, sigmas: f64) -> f64 {
        let b = self.bound;
        b + sigmas * (b * (1.0 - b) / self.probe.trials as f64).sqrt()
    }

    pub fn exceedance_ok(&self, sigmas: f64) -> bool {
        let allowed = self.exceedance_allowance(sigmas);
        self.exceedance_rate.iter().all(|&e| e <= allowed)
    }

    pub fn max_exceedance(&self) -> f64 {
        self.exceedance_rate.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_report(&self) -> Report {
        let p = &self.probe;
        let mut rep = Report::new("martingale");
        rep.push("n", p.n);
        rep.push("r", p.r);
        rep.push("K", p.k);
        rep.push("neutral_position", p.neutral_position);
        rep.push("T", p.steps);
        rep.push("trials", p.trials);
        rep.push("seed", p.seed);
        rep.push("bound", fmt_f(self.bound));
        rep.push(
            "exceedance_allowance",
            fmt_f(self.exceedance_allowance(3.0)),
        );
        rep.push("drift_within_4se", self.drift_ok(MEAN_SIGMAS));
        rep.push("exceedance_within_bound", self.exceedance_ok(3.0));
        rep.push(
            "passed",
            self.drift_ok(MEAN_SIGMAS) && self.exceedance_ok(3.0),
        );
        let mut table = Table::new(
            "per_value",
            &["j", "mean_drift", "std_error", "exceedance_rate"],
        );
        for j in 0..p.r {
            table.push_row(vec![
                j.to_string(),
                fmt_f(self.mean_drift[j]),
                fmt_f(self.std_error[j]),
                format!("{:.6}", self.exceedance_rate[j]),
            ]);
        }
        rep.table = Some(table);
        rep
    }
}

pub fn martingale_probe(probe: &MartingaleProbe) -> Result<MartingaleReport> {
    let params = ModelParams::new(probe.n, probe.r, probe.k)?;
    let fitness = NeutralROneMax::new(probe.n, probe.r, probe.neutral_position)?;
    if probe.trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let (r, k, pos) = (probe.r, probe.k, probe.neutral_position);
    let start = k / r as u32;

    // per trial: final counts of the neutral row and per-value exceedance flags
    let outcomes: Vec<(Vec<u32>, Vec<bool>)> = (0..probe.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_from_seed(derive_trial_seed(
                probe.seed,
                r as u64,
                k as u64,
                trial as u64,
            ));
            let mut model = FrequencyMatrix::init_uniform(params);
            let mut max_dev = vec![0u32; r];
            evolve(&mut model, &fitness, &mut rng, probe.steps, |m| {
                for (dev, &c) in max_dev.iter_mut().zip(m.row(pos)) {
                    *dev = (*dev).max(c.abs_diff(start));
                }
            });
            // |p - 1/r| >= 1/(2r)  <=>  2 r |c - K/r| >= K
            let exceeded = max_dev
                .iter()
                .map(|&d| 2 * r as u64 * d as u64 >= k as u64)
                .collect();
            (model.row(pos).to_vec(), exceeded)
        })
        .collect();

    let kf = k as f64;
    let mut mean_drift = Vec::with_capacity(r);
    let mut std_error = Vec::with_capacity(r);
    let mut exceedance_rate = Vec::with_capacity(r);
    for j in 0..r {
        let drifts = outcomes
            .iter()
            .map(|(row, _)| (row[j] as f64 - start as f64) / kf);
        let (m, se) = mean_and_se(drifts);
        mean_drift.push(m);
        std_error.push(se);
        let hits = outcomes.iter().filter(|(_, ex)| ex[j]).count();
        exceedance_rate.push(hits as f64 / probe.trials as f64);
    }
    Ok(MartingaleReport {
        probe: probe.clone(),
        mean_drift,
        std_error,
        exceedance_rate,
        bound: concentration_tail(k, probe.steps, r),
    })
}

// ---------------------------------------------------------------------------
// weak preference vs. neutral

/// Compares `p_{1,r-1}` under r-OneMax (position 1 weakly prefers `r-1`)
/// with the same frequency when position 1 is neutral.
#[derive(Clone, Debug, PartialEq)]
pub struct DominanceProbe {
    pub n: usize,
    pub r: usize,
    pub k: u32,
    pub steps: u64,
    pub trials: usize,
    pub seed: u64,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominanceReport {
    pub probe: DominanceProbe,
    /// Empirical `P[count <= c]` for `c = 0..=K`, weakly preferring process.
    pub p_cdf: Vec<f64>,
    /// Same for the neutral process.
    pub q_cdf: Vec<f64>,
    /// `max_c (p_cdf[c] - q_cdf[c])`, floored at zero.
    pub max_violation: f64,
    /// One-sided two-sample Kolmogorov-Smirnov critical value at `alpha`.
    pub tolerance: f64,
}

impl DominanceReport {
    pub fn violated(&self) -> bool {
        self.max_violation > self.tolerance
    }

    pub fn to_report(&self) -> Report {
        let p = &self.probe;
        let mut rep = Report::new("dominance");
        rep.push("n", p.n);
        rep.push("r", p.r);
        rep.push("K", p.k);
        rep.push("T", p.steps);
        rep.push("trials", p.trials);
        rep.push("seed", p.seed);
        rep.push("alpha", p.alpha);
        rep.push("max_violation", format!("{:.6}", self.max_violation));
        rep.push("tolerance", format!("{:.6}", self.tolerance));
        rep.push("passed", !self.violated());
        let mut table = Table::new("cdf", &["count", "p_cdf", "q_cdf"]);
        for c in 0..self.p_cdf.len() {
            table.push_row(vec![
                c.to_string(),
                format!("{:.6}", self.p_cdf[c]),
                format!("{:.6}", self.q_cdf[c]),
            ]);
        }
        rep.table = Some(table);
        rep
    }
}

/// `sqrt(-ln(alpha) / 2 * (m + n) / (m n))`.
pub fn ks_one_sided_critical(alpha: f64, m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    ((-alpha.ln() / 2.0) * (m + n) / (m * n)).sqrt()
}

pub fn empirical_cdf(counts: &[u32], k: u32) -> Vec<f64> {
    let mut hist = vec![0usize; k as usize + 1];
    for &c in counts {
        hist[c as usize] += 1;
    }
    let total = counts.len() as f64;
    let mut acc = 0usize;
    hist.iter()
        .map(|&h| {
            acc += h;
            acc as f64 / total
        })
        .collect()
}

pub fn dominance_probe(probe: &DominanceProbe) -> Result<DominanceReport> {
    let params = ModelParams::new(probe.n, probe.r, probe.k)?;
    if probe.trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let preferring = FitnessFunction::r_onemax(probe.n, probe.r);
    let neutral = NeutralROneMax::new(probe.n, probe.r, 0)?;
    let (r, k) = (probe.r as u64, probe.k as u64);
    let top = params.r() - 1;

    let finals: Vec<(u32, u32)> = (0..probe.trials)
        .into_par_iter()
        .map(|trial| {
            let t = trial as u64;
            let mut rng_p = rng_from_seed(derive_trial_seed(probe.seed, r, k, 2 * t));
            let mut rng_q = rng_from_seed(derive_trial_seed(probe.seed, r, k, 2 * t + 1));
            let mut mp = FrequencyMatrix::init_uniform(params);
            let mut mq = FrequencyMatrix::init_uniform(params);
            evolve(&mut mp, &preferring, &mut rng_p, probe.steps, |_| {});
            evolve(&mut mq, &neutral, &mut rng_q, probe.steps, |_| {});
            (mp.count(0, top), mq.count(0, top))
        })
        .collect();

    let p_counts: Vec<u32> = finals.iter().map(|f| f.0).collect();
    let q_counts: Vec<u32> = finals.iter().map(|f| f.1).collect();
    let p_cdf = empirical_cdf(&p_counts, probe.k);
    let q_cdf = empirical_cdf(&q_counts, probe.k);
    let max_violation = p_cdf
        .iter()
        .zip(&q_cdf)
        .map(|(a, b)| a - b)
        .fold(0.0, f64::max);
    Ok(DominanceReport {
        tolerance: ks_one_sided_critical(probe.alpha, probe.trials, probe.trials),
        probe: probe.clone(),
        p_cdf,
        q_cdf,
        max_violation,
    })
}

// ---------------------------------------------------------------------------
// snapshot checks

/// A random snapshot of `r-1` frequencies: `n` in `1..=max_n`, each a
/// multiple of `1/K` for a random `K` in `2..=64`, endpoints included.
pub fn random_top_snapshot<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> Vec<f64> {
    let n = rng.random_range(1..=max_n);
    let k = rng.random_range(2..=64u32);
    (0..n)
        .map(|_| rng.random_range(0..=k) as f64 / k as f64)
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollisionCase {
    pub top_freqs: Vec<f64>,
    pub position: usize,
    pub exact: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollisionReport {
    pub cases: Vec<CollisionCase>,
}

impl CollisionReport {
    /// Hard inequality, no tolerance.
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.exact >= c.bound)
    }

    pub fn min_slack(&self) -> f64 {
        self.cases
            .iter()
            .map(|c| c.exact - c.bound)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_report(&self) -> Report {
        let mut rep = Report::new("collision");
        rep.push("snapshots", self.cases.len());
        rep.push("min_exact_minus_bound", format!("{:.6}", self.min_slack()));
        rep.push("passed", self.passed());
        let mut table = Table::new("cases", &["n", "i", "exact", "bound"]);
        for c in &self.cases {
            table.push_row(vec![
                c.top_freqs.len().to_string(),
                c.position.to_string(),
                format!("{:.6}", c.exact),
                format!("{:.6}", c.bound),
            ]);
        }
        rep.table = Some(table);
        rep
    }
}

/// Compares exact `P[D_i = 0]` with its closed-form lower bound on random snapshots.
pub fn collision_check(snapshots: usize, max_n: usize, seed: u64) -> CollisionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = (0..snapshots)
        .map(|_| {
            let top_freqs = random_top_snapshot(&mut rng, max_n);
            let position = rng.random_range(0..top_freqs.len());
            CollisionCase {
                exact: exact_collision_probability(&top_freqs, position),
                bound: collision_probability_bound(&top_freqs, position),
                top_freqs,
                position,
            }
        })
        .collect();
    CollisionReport { cases }
}

/// Random model with every `p_{i,r-1} >= 1/K`; the remaining mass of each
/// row is split uniformly at random among the other values.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, params: ModelParams) -> FrequencyMatrix {
    let (n, r, k) = (params.n(), params.r(), params.k());
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|_| {
            let mut row = vec![0u32; r];
            row[r - 1] = rng.random_range(1..=k);
            for _ in 0..k - row[r - 1] {
                row[rng.random_range(0..r - 1)] += 1;
            }
            row
        })
        .collect();
    FrequencyMatrix::from_counts(params, &rows).expect("rows sum to K by construction")
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialCase {
    pub params: ModelParams,
    pub phi: f64,
    pub floor: f64,
    pub bound: f64,
    pub mean_drop: f64,
    pub std_error: f64,
    pub exact_drop: f64,
}

impl PotentialCase {
    pub fn bound_ok(&self, sigmas: f64) -> bool {
        self.mean_drop >= self.bound - sigmas * self.std_error
    }

    pub fn exact_ok(&self, sigmas: f64) -> bool {
        within_sigmas(self.mean_drop, self.exact_drop, self.std_error, sigmas)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialReport {
    pub steps: usize,
    pub cases: Vec<PotentialCase>,
}

impl PotentialReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.bound_ok(MEAN_SIGMAS))
    }

    /// Monte Carlo mean agrees with the exact expected drop.
    pub fn exact_agreement(&self) -> bool {
        self.cases.iter().all(|c| c.exact_ok(MEAN_SIGMAS))
    }

    pub fn to_report(&self) -> Report {
        let mut rep = Report::new("potential_drift");
        rep.push("snapshots", self.cases.len());
        rep.push("steps_per_snapshot", self.steps);
        rep.push("exact_agreement", self.exact_agreement());
        rep.push("passed", self.passed());
        let mut table = Table::new(
            "cases",
            &[
                "n",
                "r",
                "K",
                "phi",
                "s",
                "bound",
                "mean_drop",
                "std_error",
                "exact_drop",
            ],
        );
        for c in &self.cases {
            table.push_row(vec![
                c.params.n().to_string(),
                c.params.r().to_string(),
                c.params.k().to_string(),
                format!("{:.6}", c.phi),
                format!("{:.6}", c.floor),
                fmt_f(c.bound),
                fmt_f(c.mean_drop),
                fmt_f(c.std_error),
                fmt_f(c.exact_drop),
            ]);
        }
        rep.table = Some(table);
        rep
    }
}

/// Estimates the one-step potential drop at random snapshots with
/// `phi >= 1/2` and compares it with `2 s sqrt(phi) / (15K)`.
pub fn potential_drift_check(
    snapshots: usize,
    steps: usize,
    max_n: usize,
    seed: u64,
) -> Result<PotentialReport> {
    if steps < 2 {
        return Err(Error::InvalidParams(
            "need at least 2 steps per snapshot".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut setups = Vec::with_capacity(snapshots);
    while setups.len() < snapshots {
        let n = rng.random_range(2..=max_n.max(2));
        let r = rng.random_range(2..=5usize);
        let k = (r * rng.random_range(2..=40usize)) as u32;
        let params = ModelParams::new(n, r, k)?;
        let model = random_model(&mut rng, params);
        if compute_potential(&model).value() >= 0.5 {
            setups.push((model, rng.random::<u64>()));
        }
    }

    let cases = setups
        .into_par_iter()
        .map(|(model, case_seed)| {
            let params = model.params();
            let fitness = FitnessFunction::r_onemax(params.n(), params.r());
            let phi = compute_potential(&model);
            let top = model.top_frequencies();
            let floor = top.iter().copied().fold(1.0, f64::min);
            let mut rng = rng_from_seed(case_seed);
            let drops: Vec<f64> = (0..steps)
                .map(|_| {
                    let mut m = model.clone();
                    let rec = step(&mut m, &fitness, &mut rng, 0);
                    (phi.units as f64 - rec.phi.units as f64) / params.k() as f64
                })
                .collect();
            let (mean_drop, std_error) = mean_and_se(drops.iter().copied());
            Ok(PotentialCase {
                params,
                phi: phi.value(),
                floor,
                bound: potential_drift_bound(phi.value(), floor, params.k())?,
                mean_drop,
                std_error,
                exact_drop: expected_potential_drop(&top, params.k()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PotentialReport { steps, cases })
}

/// Per-position statistics of the step classifier at a fixed snapshot.
#[derive(Clone, Debug, PartialEq)]
pub struct StepPositionStats {
    pub p: f64,
    pub biased_steps: u64,
    pub biased_up: u64,
    pub biased_down: u64,
    pub rw_steps: u64,
    pub rw_up: u64,
    pub rw_down: u64,
    /// Exact `P[D_i in {-1, 0}]`.
    pub biased_probability: f64,
}

impl StepPositionStats {
    /// z-scores of: biased up-rate vs `2p(1-p)`, rw net change vs `0`,
    /// biased-step frequency vs its exact probability.
    pub fn z_scores(&self, total: u64) -> [f64; 3] {
        let q = 2.0 * self.p * (1.0 - self.p);
        let z = |obs: f64, exp: f64, var: f64| {
            if var <= 0.0 {
                if (obs - exp).abs() < 1e-9 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (obs - exp) / var.sqrt()
            }
        };
        let b = self.biased_steps as f64;
        let rw = self.rw_steps as f64;
        let pb = self.biased_probability;
        [
            z(self.biased_up as f64, b * q, b * q * (1.0 - q)),
            z(self.rw_up as f64 - self.rw_down as f64, 0.0, rw * q),
            z(b, total as f64 * pb, total as f64 * pb * (1.0 - pb)),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepDistributionReport {
    pub params: ModelParams,
    pub steps: u64,
    pub positions: Vec<StepPositionStats>,
}

impl StepDistributionReport {
    pub fn max_abs_z(&self) -> f64 {
        self.positions
            .iter()
            .flat_map(|p| p.z_scores(self.steps))
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    /// Biased steps never lower `p_{i,r-1}` and every z-score is within
    /// [`MEAN_SIGMAS`].
    pub fn passed(&self) -> bool {
        self.positions.iter().all(|p| p.biased_down == 0) && self.max_abs_z() <= MEAN_SIGMAS
    }

    pub fn to_report(&self) -> Report {
        let mut rep = Report::new("step_distribution");
        rep.push("n", self.params.n());
        rep.push("r", self.params.r());
        rep.push("K", self.params.k());
        rep.push("steps", self.steps);
        rep.push("max_abs_z", format!("{:.4}", self.max_abs_z()));
        rep.push("passed", self.passed());
        let mut table = Table::new(
            "positions",
            &[
                "i",
                "p",
                "biased",
                "biased_up",
                "biased_down",
                "rw",
                "rw_up",
                "rw_down",
                "exact_biased_prob",
            ],
        );
        for (i, s) in self.positions.iter().enumerate() {
            table.push_row(vec![
                i.to_string(),
                format!("{:.6}", s.p),
                s.biased_steps.to_string(),
                s.biased_up.to_string(),
                s.biased_down.to_string(),
                s.rw_steps.to_string(),
                s.rw_up.to_string(),
                s.rw_down.to_string(),
                format!("{:.6}", s.biased_probability),
            ]);
        }
        rep.table = Some(table);
        rep
    }
}

/// Repeats one step from a fixed random snapshot and tallies, per position,
/// the change of `p_{i,r-1}` conditioned on the step classification.
pub fn step_distribution_check(
    params: ModelParams,
    steps: u64,
    seed: u64,
) -> StepDistributionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let model = random_model(&mut rng, params);
    let fitness = FitnessFunction::r_onemax(params.n(), params.r());
    let top_freqs = model.top_frequencies();
    let top = params.top();
    let mut positions: Vec<StepPositionStats> = top_freqs
        .iter()
        .enumerate()
        .map(|(i, &p)| StepPositionStats {
            p,
            biased_steps: 0,
            biased_up: 0,
            biased_down: 0,
            rw_steps: 0,
            rw_up: 0,
            rw_down: 0,
            biased_probability: biased_step_probability(&top_freqs, i),
        })
        .collect();
    for _ in 0..steps {
        let mut m = model.clone();
        let rec = step(&mut m, &fitness, &mut rng, 0);
        for (i, tag) in rec.per_position.iter().enumerate() {
            let change = rec.count_change(i, top);
            let s = &mut positions[i];
            match tag.kind {
                StepKind::BiasedStep => {
                    s.biased_steps += 1;
                    s.biased_up += (change > 0) as u64;
                    s.biased_down += (change < 0) as u64;
                }
                StepKind::RwStep => {
                    s.rw_steps += 1;
                    s.rw_up += (change > 0) as u64;
                    s.rw_down += (change < 0) as u64;
                }
            }
        }
    }
    StepDistributionReport {
        params,
        steps,
        positions,
    }
}
