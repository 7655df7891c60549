//! Closed-form bounds on genetic drift and on the progress of the r-cGA on
//! r-OneMax. Probability bounds are clamped to `[0, 1]`.

use crate::error::{Error, Result};

/// Parameters for the time-dependent concentration bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundQuery {
    pub n: usize,
    pub r: usize,
    pub k: u32,
    /// Number of iterations `T`.
    pub t: u64,
}

impl BoundQuery {
    pub fn new(n: usize, r: usize, k: u32, t: u64) -> Result<Self> {
        if n == 0 || r < 2 || k == 0 || t == 0 {
            return Err(Error::InvalidParams(format!(
                "bound query needs n>=1, r>=2, K>=1, T>=1 (got n={n}, r={r}, K={k}, T={t})"
            )));
        }
        Ok(Self { n, r, k, t })
    }
}

/// `min(1, 2 exp(-K^2 / (8 T r^2)))`. For `T = 0` the deviation event is
/// impossible and the bound is `0`.
pub fn concentration_tail(k: u32, t: u64, r: usize) -> f64 {
    if t == 0 {
        return 0.0;
    }
    let (k, t, r) = (k as f64, t as f64, r as f64);
    (2.0 * (-(k * k) / (8.0 * t * r * r)).exp()).min(1.0)
}

/// Upper bound on `P[max_{t<=T} |p_{i,j}^(t) - p_{i,j}^(0)| >= 1/(2r)]` for a
/// neutral position `i` and any value `j`.
pub fn neutral_concentration_bound(q: &BoundQuery) -> f64 {
    concentration_tail(q.k, q.t, q.r)
}

/// Upper bound on `P[min_{t<=T} p_{i,r-1}^(t) <= p_{i,r-1}^(0) - 1/(2r)]` for
/// a position that weakly prefers `r-1`.
///
/// Same closed form as [`neutral_concentration_bound`], but only the downward
/// deviation is bounded.
pub fn weak_preference_bound(q: &BoundQuery) -> f64 {
    concentration_tail(q.k, q.t, q.r)
}

/// `sum_{j != i} p_j (1 - p_j)`, the variance of the number of `r-1`
/// entries outside position `i` in one sample.
pub fn variance_excluding(top_freqs: &[f64], i: usize) -> f64 {
    top_freqs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &p)| p * (1.0 - p))
        .sum()
}

fn collision_denominator(top_freqs: &[f64], i: usize) -> f64 {
    2.0 * (3.0 * variance_excluding(top_freqs, i)).sqrt() + 1.0
}

/// Lower bound on `P[D_i = 0]` given the snapshot of `p_{j,r-1}` for all `j`.
pub fn collision_probability_bound(top_freqs: &[f64], i: usize) -> f64 {
    (4.0 / (9.0 * collision_denominator(top_freqs, i))).clamp(0.0, 1.0)
}

/// Lower bound on the expected one-step change of `p_{i,r-1}`.
///
/// Requires `1/K <= p_{i,r-1} <= 1 - 1/K`.
pub fn single_frequency_drift_bound(top_freqs: &[f64], i: usize, k: u32) -> Result<f64> {
    let p = *top_freqs
        .get(i)
        .ok_or_else(|| Error::Precondition(format!("position {i} outside snapshot")))?;
    let step = 1.0 / k as f64;
    let eps = 1e-12;
    if p < step - eps || p > 1.0 - step + eps {
        return Err(Error::Precondition(format!(
            "frequency {p} outside [1/K, 1-1/K] for K={k}"
        )));
    }
    Ok(8.0 * p * (1.0 - p) / (9.0 * k as f64 * collision_denominator(top_freqs, i)))
}

/// Lower bound `2 s sqrt(phi) / (15 K)` on the expected one-step decrease of
/// the potential, valid when every `p_{i,r-1} >= s` and `phi >= 1/2`.
pub fn potential_drift_bound(phi: f64, s: f64, k: u32) -> Result<f64> {
    if phi < 0.5 {
        return Err(Error::Precondition(format!("potential {phi} below 1/2")));
    }
    if s <= 0.0 {
        return Err(Error::Precondition(format!(
            "frequency floor {s} must be positive"
        )));
    }
    Ok(2.0 * s * phi.sqrt() / (15.0 * k as f64))
}

/// The shape `K sqrt(n) ln(r) ln(n)` of the high-probability runtime bound
/// (in iterations, constants omitted).
pub fn runtime_bound_shape(n: usize, r: usize, k: u32) -> f64 {
    k as f64 * (n as f64).sqrt() * (r as f64).ln() * (n as f64).ln()
}

/// Smallest multiple of `r` that is at least `value`.
pub fn round_up_to_multiple(value: f64, r: usize) -> u32 {
    let r = r as u64;
    let units = (value / r as f64).ceil().max(1.0) as u64;
    (units * r) as u32
}

/// Smallest multiple of `r` at least `c r^2 sqrt(n) (ln n + ln r)`.
pub fn low_drift_population_size(n: usize, r: usize, c: f64) -> u32 {
    let (nf, rf) = (n as f64, r as f64);
    round_up_to_multiple(c * rf * rf * nf.sqrt() * (nf.ln() + rf.ln()), r)
}

/// Smallest multiple of `r` at least `c r sqrt(n) ln r ln n`, the population
/// size used for G-OneMax scaling diagnostics.
pub fn g_onemax_population_size(n: usize, r: usize, c: f64) -> u32 {
    let (nf, rf) = (n as f64, r as f64);
    round_up_to_multiple(c * rf * nf.sqrt() * rf.ln() * nf.ln(), r)
}
