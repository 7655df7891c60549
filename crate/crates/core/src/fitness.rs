//! Generalized OneMax functions over `{0, ..., r-1}^n`.
//!
//! All fitness values are exact integers.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Individual;

/// An r-valued objective to be maximized.
pub trait Fitness: Send + Sync {
    fn evaluate(&self, x: &Individual) -> u64;

    fn max_value(&self) -> u64;

    /// The value position `i` holds in every maximizer, if there is one.
    ///
    /// Used for stagnation detection: if the model can no longer sample this
    /// value at `i`, the maximum is unreachable.
    fn required_value(&self, i: usize) -> Option<u16>;

    fn is_optimal(&self, x: &Individual) -> bool {
        self.evaluate(x) == self.max_value()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitnessKind {
    /// Number of positions holding `r-1`.
    ROneMax,
    /// Sum of all entries.
    GOneMax,
    /// `n` minus the Hamming distance to the optimum `a`.
    ROneMaxAt(Individual),
    /// `n(r-1)` minus the cyclic distance to the optimum `a`.
    GOneMaxAt(Individual),
}

/// One of the four generalized OneMax functions for fixed `(n, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitnessFunction {
    kind: FitnessKind,
    n: usize,
    r: usize,
}

impl FitnessFunction {
    pub fn r_onemax(n: usize, r: usize) -> Self {
        Self {
            kind: FitnessKind::ROneMax,
            n,
            r,
        }
    }

    pub fn g_onemax(n: usize, r: usize) -> Self {
        Self {
            kind: FitnessKind::GOneMax,
            n,
            r,
        }
    }

    pub fn r_onemax_at(optimum: Individual, r: usize) -> Result<Self> {
        optimum.validate(optimum.len(), r)?;
        Ok(Self {
            n: optimum.len(),
            kind: FitnessKind::ROneMaxAt(optimum),
            r,
        })
    }

    pub fn g_onemax_at(optimum: Individual, r: usize) -> Result<Self> {
        optimum.validate(optimum.len(), r)?;
        Ok(Self {
            n: optimum.len(),
            kind: FitnessKind::GOneMaxAt(optimum),
            r,
        })
    }

    /// Instantiates `family` for `(n, r)`; the `*At` families draw their
    /// optimum uniformly at random from `seed`.
    pub fn from_family(family: FitnessFamily, n: usize, r: usize, seed: u64) -> Self {
        let random_optimum = || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Individual::random(n, r, &mut rng)
        };
        let kind = match family {
            FitnessFamily::ROneMax => FitnessKind::ROneMax,
            FitnessFamily::GOneMax => FitnessKind::GOneMax,
            FitnessFamily::ROneMaxAt => FitnessKind::ROneMaxAt(random_optimum()),
            FitnessFamily::GOneMaxAt => FitnessKind::GOneMaxAt(random_optimum()),
        };
        Self { kind, n, r }
    }

    pub fn kind(&self) -> &FitnessKind {
        &self.kind
    }

    pub fn family(&self) -> FitnessFamily {
        match self.kind {
            FitnessKind::ROneMax => FitnessFamily::ROneMax,
            FitnessKind::GOneMax => FitnessFamily::GOneMax,
            FitnessKind::ROneMaxAt(_) => FitnessFamily::ROneMaxAt,
            FitnessKind::GOneMaxAt(_) => FitnessFamily::GOneMaxAt,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// The unique maximizer.
    pub fn optimum(&self) -> Individual {
        match &self.kind {
            FitnessKind::ROneMax | FitnessKind::GOneMax => {
                Individual::constant(self.n, (self.r - 1) as u16)
            }
            FitnessKind::ROneMaxAt(a) | FitnessKind::GOneMaxAt(a) => a.clone(),
        }
    }
}

impl Fitness for FitnessFunction {
    fn evaluate(&self, x: &Individual) -> u64 {
        debug_assert_eq!(x.len(), self.n);
        let top = (self.r - 1) as u16;
        match &self.kind {
            FitnessKind::ROneMax => r_onemax(x, top),
            FitnessKind::GOneMax => g_onemax(x),
            FitnessKind::ROneMaxAt(a) => r_onemax_at(a, x),
            FitnessKind::GOneMaxAt(a) => g_onemax_at(a, x, self.r),
        }
    }

    fn max_value(&self) -> u64 {
        match self.kind {
            FitnessKind::ROneMax | FitnessKind::ROneMaxAt(_) => self.n as u64,
            FitnessKind::GOneMax | FitnessKind::GOneMaxAt(_) => (self.n * (self.r - 1)) as u64,
        }
    }

    fn required_value(&self, i: usize) -> Option<u16> {
        match &self.kind {
            FitnessKind::ROneMax | FitnessKind::GOneMax => Some((self.r - 1) as u16),
            FitnessKind::ROneMaxAt(a) | FitnessKind::GOneMaxAt(a) => a.values().get(i).copied(),
        }
    }
}

pub fn r_onemax(x: &Individual, top: u16) -> u64 {
    x.values().iter().filter(|&&v| v == top).count() as u64
}

pub fn g_onemax(x: &Individual) -> u64 {
    x.values().iter().map(|&v| v as u64).sum()
}

pub fn r_onemax_at(a: &Individual, b: &Individual) -> u64 {
    let dist = a
        .values()
        .iter()
        .zip(b.values())
        .filter(|(u, v)| u != v)
        .count();
    (a.len() - dist) as u64
}

/// Sum over positions of `min(|a_i - b_i|, r - |a_i - b_i|)`.
pub fn ring_distance(a: &Individual, b: &Individual, r: usize) -> u64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(&u, &v)| {
            let d = (u as i64 - v as i64).unsigned_abs();
            d.min(r as u64 - d)
        })
        .sum()
}

pub fn g_onemax_at(a: &Individual, b: &Individual, r: usize) -> u64 {
    (a.len() * (r - 1)) as u64 - ring_distance(a, b, r)
}

/// r-OneMax with one position removed from the sum, making it neutral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeutralROneMax {
    n: usize,
    r: usize,
    neutral: usize,
}

impl NeutralROneMax {
    pub fn new(n: usize, r: usize, neutral: usize) -> Result<Self> {
        if neutral >= n {
            return Err(Error::InvalidParams(format!(
                "neutral position {neutral} out of range for n={n}"
            )));
        }
        Ok(Self { n, r, neutral })
    }

    pub fn neutral_position(&self) -> usize {
        self.neutral
    }
}

impl Fitness for NeutralROneMax {
    fn evaluate(&self, x: &Individual) -> u64 {
        let top = (self.r - 1) as u16;
        let skipped = (x.values()[self.neutral] == top) as u64;
        r_onemax(x, top) - skipped
    }

    fn max_value(&self) -> u64 {
        (self.n - 1) as u64
    }

    fn required_value(&self, i: usize) -> Option<u16> {
        (i != self.neutral).then_some((self.r - 1) as u16)
    }
}

/// Fitness families as named on the command line and in output file names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FitnessFamily {
    ROneMax,
    GOneMax,
    /// r-OneMax towards a random optimum drawn per run.
    ROneMaxAt,
    /// G-OneMax towards a random optimum drawn per run.
    GOneMaxAt,
}

impl FitnessFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            FitnessFamily::ROneMax => "r-onemax",
            FitnessFamily::GOneMax => "g-onemax",
            FitnessFamily::ROneMaxAt => "r-onemax-at",
            FitnessFamily::GOneMaxAt => "g-onemax-at",
        }
    }
}

impl fmt::Display for FitnessFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FitnessFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r-onemax" | "ronemax" => Ok(FitnessFamily::ROneMax),
            "g-onemax" | "gonemax" => Ok(FitnessFamily::GOneMax),
            "r-onemax-at" | "r-onemax-at-random" => Ok(FitnessFamily::ROneMaxAt),
            "g-onemax-at" | "g-onemax-at-random" => Ok(FitnessFamily::GOneMaxAt),
            other => Err(Error::Parse(format!("unknown fitness {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(v: &[u16]) -> Individual {
        Individual::new(v.to_vec())
    }

    #[test]
    fn r_onemax_examples() {
        let f = FitnessFunction::r_onemax(4, 3);
        assert_eq!(f.evaluate(&ind(&[2, 2, 2, 2])), 4);
        assert_eq!(f.evaluate(&ind(&[0, 1, 2, 2])), 2);
        let f = FitnessFunction::r_onemax(3, 5);
        assert_eq!(f.evaluate(&ind(&[0, 0, 0])), 0);
    }

    #[test]
    fn g_onemax_examples() {
        assert_eq!(
            FitnessFunction::g_onemax(3, 3).evaluate(&ind(&[0, 1, 2])),
            3
        );
        let f = FitnessFunction::g_onemax(2, 4);
        assert_eq!(f.evaluate(&ind(&[3, 3])), 6);
        assert_eq!(f.max_value(), 6);
        assert_eq!(FitnessFunction::g_onemax(1, 10).evaluate(&ind(&[0])), 0);
    }

    #[test]
    fn at_variants_examples() {
        let a = ind(&[1, 2, 3]);
        let f = FitnessFunction::r_onemax_at(a.clone(), 4).unwrap();
        assert_eq!(f.evaluate(&a), 3);
        assert_eq!(f.evaluate(&ind(&[1, 0, 0])), 1);

        let f = FitnessFunction::g_onemax_at(ind(&[0]), 3).unwrap();
        assert_eq!(f.evaluate(&ind(&[2])), 1);
        let f = FitnessFunction::g_onemax_at(ind(&[0, 0]), 5).unwrap();
        assert_eq!(f.evaluate(&ind(&[2, 3])), 4);
        assert_eq!(f.evaluate(&ind(&[0, 0])), 8);

        assert!(FitnessFunction::r_onemax_at(ind(&[4]), 4).is_err());
    }

    #[test]
    fn neutral_position_ignored() {
        let f = NeutralROneMax::new(3, 3, 1).unwrap();
        assert_eq!(f.evaluate(&ind(&[2, 2, 2])), 2);
        assert_eq!(f.evaluate(&ind(&[2, 0, 2])), 2);
        assert_eq!(f.max_value(), 2);
        assert_eq!(f.required_value(1), None);
        assert_eq!(f.required_value(0), Some(2));
        assert!(NeutralROneMax::new(3, 3, 3).is_err());
    }

    #[test]
    fn random_optimum_is_seeded() {
        let f1 = FitnessFunction::from_family(FitnessFamily::GOneMaxAt, 20, 5, 9);
        let f2 = FitnessFunction::from_family(FitnessFamily::GOneMaxAt, 20, 5, 9);
        assert_eq!(f1, f2);
        assert_eq!(f1.evaluate(&f1.optimum()), f1.max_value());
        assert_eq!(f1.optimum().to_string().split(',').count(), 20);
    }

    #[test]
    fn family_names() {
        for fam in [
            FitnessFamily::ROneMax,
            FitnessFamily::GOneMax,
            FitnessFamily::ROneMaxAt,
            FitnessFamily::GOneMaxAt,
        ] {
            assert_eq!(fam.as_str().parse::<FitnessFamily>().unwrap(), fam);
        }
        assert!("leadingones".parse::<FitnessFamily>().is_err());
    }
}
