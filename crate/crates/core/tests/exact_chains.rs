//! Small instances where the r-cGA is a Markov chain on a handful of states,
//! compared with exact transition matrices and an independent binary cGA.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rcga::fitness::NeutralROneMax;
use rcga::harness::derive_trial_seed;
use rcga::{run, step, FitnessFunction, FrequencyMatrix, ModelParams, RunConfig, RunStatus};

/// Distribution of the count of value 1 after `t` steps, n = 1, r = 2.
/// Preferring: moves up with probability 2p(1-p). Neutral: up and down with
/// probability p(1-p) each (ties keep the first sample as winner).
fn exact_chain(k: usize, t: usize, preferring: bool) -> Vec<f64> {
    let mut dist = vec![0.0; k + 1];
    dist[k / 2] = 1.0;
    for _ in 0..t {
        let mut next = vec![0.0; k + 1];
        for (c, &mass) in dist.iter().enumerate() {
            let p = c as f64 / k as f64;
            let q = p * (1.0 - p);
            if preferring {
                if c < k {
                    next[c + 1] += mass * 2.0 * q;
                }
                next[c] += mass * (1.0 - 2.0 * q);
            } else {
                if c < k {
                    next[c + 1] += mass * q;
                }
                if c > 0 {
                    next[c - 1] += mass * q;
                }
                next[c] += mass * (1.0 - 2.0 * q);
            }
        }
        dist = next;
    }
    dist
}

fn cdf(pmf: &[f64]) -> Vec<f64> {
    pmf.iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

#[test]
fn preferring_chain_dominates_neutral_chain() {
    for k in [2usize, 4, 6] {
        for t in 0..60 {
            let p = cdf(&exact_chain(k, t, true));
            let q = cdf(&exact_chain(k, t, false));
            for c in 0..=k {
                assert!(p[c] <= q[c] + 1e-12, "K={k} t={t} c={c}");
            }
        }
    }
}

fn simulated_counts(k: u32, t: u64, preferring: bool, trials: u64) -> Vec<u64> {
    let params = ModelParams::new(1, 2, k).unwrap();
    let r_onemax = FitnessFunction::r_onemax(1, 2);
    let neutral = NeutralROneMax::new(1, 2, 0).unwrap();
    let mut hist = vec![0u64; k as usize + 1];
    for trial in 0..trials {
        let mut rng = rcga::algorithm::rng_from_seed(derive_trial_seed(5, 2, k as u64, trial));
        let mut model = FrequencyMatrix::init_uniform(params);
        for s in 0..t {
            if preferring {
                step(&mut model, &r_onemax, &mut rng, s);
            } else {
                step(&mut model, &neutral, &mut rng, s);
            }
        }
        hist[model.count(0, 1) as usize] += 1;
    }
    hist
}

#[test]
fn simulation_matches_exact_chain() {
    let trials = 20_000;
    for preferring in [true, false] {
        let k = 6;
        let t = 12;
        let exact = exact_chain(k as usize, t as usize, preferring);
        let hist = simulated_counts(k, t, preferring, trials);
        for (c, (&h, &p)) in hist.iter().zip(&exact).enumerate() {
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            let emp = h as f64 / trials as f64;
            assert!(
                (emp - p).abs() <= 4.0 * se + 1e-9,
                "preferring={preferring} c={c}: {emp} vs {p}"
            );
        }
    }
}

#[test]
fn single_position_runtime_is_geometric() {
    // n=1, r=2, K=2: each iteration samples the optimum with probability 3/4
    // and otherwise leaves the model unchanged, so E[iterations] = 4/3
    let params = ModelParams::new(1, 2, 2).unwrap();
    let f = FitnessFunction::r_onemax(1, 2);
    let trials = 20_000;
    let its: Vec<f64> = (0..trials)
        .map(|s| {
            let o = run(&RunConfig::new(params, f.clone(), s)).unwrap();
            assert_eq!(o.status, RunStatus::OptimumSampled);
            o.iterations as f64
        })
        .collect();
    let mean = its.iter().sum::<f64>() / trials as f64;
    // Var of a geometric with success 3/4 is (1/4)/(3/4)^2 = 4/9
    let se = (4.0 / 9.0 / trials as f64).sqrt();
    assert!((mean - 4.0 / 3.0).abs() <= 4.0 * se, "mean {mean}");
}

/// Textbook binary cGA without borders, written independently of the crate.
fn binary_cga(n: usize, k: u32, rng: &mut impl Rng, cap: u64) -> Option<u64> {
    let mut p = vec![0.5f64; n];
    let step = 1.0 / k as f64;
    for t in 1..=cap {
        let x: Vec<bool> = p.iter().map(|&pi| rng.random::<f64>() < pi).collect();
        let y: Vec<bool> = p.iter().map(|&pi| rng.random::<f64>() < pi).collect();
        let fx = x.iter().filter(|&&b| b).count();
        let fy = y.iter().filter(|&&b| b).count();
        if fx == n || fy == n {
            return Some(t);
        }
        let (w, l) = if fx >= fy { (&x, &y) } else { (&y, &x) };
        for i in 0..n {
            if w[i] && !l[i] {
                p[i] = (p[i] + step).min(1.0);
            } else if !w[i] && l[i] {
                p[i] = (p[i] - step).max(0.0);
            }
        }
        if p.iter().any(|&pi| pi <= 1e-12) {
            return None;
        }
    }
    None
}

#[test]
fn agrees_with_binary_cga() {
    let trials = 4000;
    for (n, k) in [(3usize, 8u32), (5, 10)] {
        let params = ModelParams::new(n, 2, k).unwrap();
        let f = FitnessFunction::r_onemax(n, 2);
        let ours: Vec<Option<u64>> = (0..trials)
            .map(|s| {
                let o = run(&RunConfig::new(params, f.clone(), s)).unwrap();
                (o.status == RunStatus::OptimumSampled).then_some(o.iterations)
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let theirs: Vec<Option<u64>> = (0..trials)
            .map(|_| binary_cga(n, k, &mut rng, 1_000_000))
            .collect();

        let rate =
            |v: &[Option<u64>]| v.iter().filter(|o| o.is_some()).count() as f64 / trials as f64;
        let (ra, rb) = (rate(&ours), rate(&theirs));
        let se = ((ra * (1.0 - ra) + rb * (1.0 - rb)) / trials as f64).sqrt();
        assert!(
            (ra - rb).abs() <= 4.0 * se + 1e-9,
            "n={n} K={k}: success {ra} vs {rb}"
        );

        let stats = |v: &[Option<u64>]| {
            let xs: Vec<f64> = v.iter().flatten().map(|&x| x as f64).collect();
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
            (m, var / xs.len() as f64)
        };
        let ((ma, va), (mb, vb)) = (stats(&ours), stats(&theirs));
        assert!(
            (ma - mb).abs() <= 4.0 * (va + vb).sqrt(),
            "n={n} K={k}: mean {ma} vs {mb}"
        );
    }
}
