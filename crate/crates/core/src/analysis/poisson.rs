//! Exact distributions derived from a snapshot of the `r-1` frequencies.
//!
//! The number of `r-1` entries of one sample outside position `i` is a
//! Poisson-binomial variable; `D_i` is the difference of two independent
//! copies of it.

/// Probability mass function of a sum of independent Bernoulli(`p_j`)
/// variables, by dynamic programming over the variables.
pub fn poisson_binomial_pmf(ps: &[f64]) -> Vec<f64> {
    let mut pmf = vec![0.0; ps.len() + 1];
    pmf[0] = 1.0;
    for (m, &p) in ps.iter().enumerate() {
        for s in (0..=m + 1).rev() {
            let stay = if s <= m { pmf[s] * (1.0 - p) } else { 0.0 };
            let moved = if s > 0 { pmf[s - 1] * p } else { 0.0 };
            pmf[s] = stay + moved;
        }
    }
    pmf
}

fn pmf_excluding(top_freqs: &[f64], i: usize) -> Vec<f64> {
    let others: Vec<f64> = top_freqs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &p)| p)
        .collect();
    poisson_binomial_pmf(&others)
}

/// Exact `P[D_i = 0] = sum_k P[X = k]^2`.
pub fn exact_collision_probability(top_freqs: &[f64], i: usize) -> f64 {
    pmf_excluding(top_freqs, i).iter().map(|q| q * q).sum()
}

/// Exact distribution of `D_i`; entry `d + (n-1)` holds `P[D_i = d]`.
pub fn d_pmf(top_freqs: &[f64], i: usize) -> Vec<f64> {
    let pmf = pmf_excluding(top_freqs, i);
    let m = pmf.len() - 1;
    let mut out = vec![0.0; 2 * m + 1];
    for (a, &pa) in pmf.iter().enumerate() {
        for (b, &pb) in pmf.iter().enumerate() {
            out[a + m - b] += pa * pb;
        }
    }
    out
}

/// Exact probability that position `i` takes a biased step, `P[D_i in {-1, 0}]`.
pub fn biased_step_probability(top_freqs: &[f64], i: usize) -> f64 {
    let pmf = d_pmf(top_freqs, i);
    let m = (pmf.len() - 1) / 2;
    let minus_one = if m >= 1 { pmf[m - 1] } else { 0.0 };
    pmf[m] + minus_one
}

/// Exact one-step `E[phi_t - phi_{t+1}]` on r-OneMax:
/// `sum_i 2 p_i (1 - p_i) / K * P[D_i in {-1, 0}]`.
pub fn expected_potential_drop(top_freqs: &[f64], k: u32) -> f64 {
    (0..top_freqs.len())
        .map(|i| {
            let p = top_freqs[i];
            2.0 * p * (1.0 - p) / k as f64 * biased_step_probability(top_freqs, i)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::collision_probability_bound;
    use proptest::prelude::*;

    /// Sums over all 2^m outcomes.
    fn brute_force_pmf(ps: &[f64]) -> Vec<f64> {
        let m = ps.len();
        let mut pmf = vec![0.0; m + 1];
        for mask in 0u32..(1 << m) {
            let mut prob = 1.0;
            for (j, &p) in ps.iter().enumerate() {
                prob *= if mask >> j & 1 == 1 { p } else { 1.0 - p };
            }
            pmf[mask.count_ones() as usize] += prob;
        }
        pmf
    }

    #[test]
    fn binomial_half_collision() {
        // X, Y ~ Bin(2, 1/2): P[X = Y] = (1 + 4 + 1) / 16
        let p = exact_collision_probability(&[0.5, 0.5, 0.5], 1);
        assert!((p - 6.0 / 16.0).abs() < 1e-15);
        assert!(p >= collision_probability_bound(&[0.5, 0.5, 0.5], 1));
    }

    #[test]
    fn deterministic_snapshot_collides_surely() {
        let snap = [1.0, 0.0, 1.0, 1.0];
        assert!((exact_collision_probability(&snap, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_position_d_is_zero() {
        assert_eq!(d_pmf(&[0.3], 0), vec![1.0]);
        assert_eq!(biased_step_probability(&[0.3], 0), 1.0);
    }

    proptest! {
        #[test]
        fn dp_matches_enumeration(ps in prop::collection::vec(0.0f64..=1.0, 0..11)) {
            let dp = poisson_binomial_pmf(&ps);
            let bf = brute_force_pmf(&ps);
            for (a, b) in dp.iter().zip(&bf) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn d_pmf_is_symmetric_distribution(ps in prop::collection::vec(0.0f64..=1.0, 1..10), pick in 0usize..10) {
            let i = pick % ps.len();
            let pmf = d_pmf(&ps, i);
            let total: f64 = pmf.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            for (a, b) in pmf.iter().zip(pmf.iter().rev()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            let m = (pmf.len() - 1) / 2;
            prop_assert!((pmf[m] - exact_collision_probability(&ps, i)).abs() < 1e-12);
        }
    }
}
