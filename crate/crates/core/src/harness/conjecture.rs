//! Scaling diagnostic for G-OneMax: mean runtime divided by `K sqrt(n) ln r`
//! at `K = c r sqrt(n) ln r ln n`. Not a proof of anything; a roughly constant
//! ratio across `n` is merely consistent with `O(K sqrt(n) log r)` scaling.

use super::sweep::{sweep, IterationCap, KRange, SweepSpec};
use crate::analysis::{g_onemax_population_size, Table};
use crate::error::{Error, Result};
use crate::fitness::FitnessFamily;

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureSpec {
    pub r: usize,
    pub ns: Vec<usize>,
    pub cs: Vec<f64>,
    pub repetitions: usize,
    pub seed: u64,
}

impl ConjectureSpec {
    pub fn new(r: usize, repetitions: usize, seed: u64) -> Self {
        Self {
            r,
            ns: vec![100, 200, 400],
            cs: vec![1.0, 2.0, 4.0],
            repetitions,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureRow {
    pub c: f64,
    pub n: usize,
    pub k: u32,
    pub mean_iterations: Option<f64>,
    pub success_rate: f64,
    /// `mean / (K sqrt(n) ln r)`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureReport {
    pub r: usize,
    pub rows: Vec<ConjectureRow>,
}

impl ConjectureReport {
    /// Largest over smallest ratio across `n` for fixed `c`.
    pub fn spread(&self, c: f64) -> Option<f64> {
        let ratios: Vec<f64> = self
            .rows
            .iter()
            .filter(|row| row.c == c)
            .map(|row| row.ratio)
            .collect::<Option<_>>()?;
        let max = ratios.iter().copied().fold(f64::MIN, f64::max);
        let min = ratios.iter().copied().fold(f64::MAX, f64::min);
        (!ratios.is_empty()).then(|| max / min)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(
            "conjecture",
            &["c", "n", "K", "mean_iterations", "success_rate", "ratio"],
        );
        let fmt = |v: Option<f64>, digits: usize| {
            v.map_or("nan".to_string(), |v| format!("{v:.digits$}"))
        };
        for row in &self.rows {
            t.push_row(vec![
                row.c.to_string(),
                row.n.to_string(),
                row.k.to_string(),
                fmt(row.mean_iterations, 1),
                format!("{:.3}", row.success_rate),
                fmt(row.ratio, 4),
            ]);
        }
        t
    }
}

pub fn conjecture_probe(spec: &ConjectureSpec) -> Result<ConjectureReport> {
    if spec.repetitions == 0 {
        return Err(Error::InvalidParams(
            "repetitions must be at least 1".into(),
        ));
    }
    if spec.r < 2 {
        return Err(Error::InvalidParams(
            "alphabet size must be at least 2".into(),
        ));
    }
    let mut rows = Vec::new();
    for &c in &spec.cs {
        for &n in &spec.ns {
            let k = g_onemax_population_size(n, spec.r, c);
            let result = sweep(&SweepSpec {
                n,
                r_list: vec![spec.r],
                k_range: KRange::single(k)?,
                family: FitnessFamily::GOneMax,
                repetitions: spec.repetitions,
                master_seed: spec.seed,
                max_iterations: IterationCap::Default,
            })?;
            let cell = &result.cells[0];
            let scale = k as f64 * (n as f64).sqrt() * (spec.r as f64).ln();
            rows.push(ConjectureRow {
                c,
                n,
                k,
                mean_iterations: cell.mean_iterations,
                success_rate: cell.success_rate(),
                ratio: cell.mean_iterations.map(|m| m / scale),
            });
        }
    }
    Ok(ConjectureReport { r: spec.r, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_repetitions_rejected() {
        assert!(conjecture_probe(&ConjectureSpec::new(3, 0, 1)).is_err());
    }

    #[test]
    fn one_row_per_c_and_n() {
        let spec = ConjectureSpec {
            r: 3,
            ns: vec![10, 20],
            cs: vec![1.0, 2.0],
            repetitions: 3,
            seed: 4,
        };
        let rep = conjecture_probe(&spec).unwrap();
        assert_eq!(rep.rows.len(), 4);
        assert!(rep.rows.iter().all(|r| r.k % 3 == 0));
        assert_eq!(rep.table().rows.len(), 4);
    }
}
