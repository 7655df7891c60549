//! The probabilistic model of the r-cGA.
//!
//! Frequencies are stored as integer counts in units of `1/K`, so every row
//! sums to exactly `K` and the model can only ever hold values in
//! `{0, 1/K, ..., 1}`. There are no borders: a count may reach `0` or `K`,
//! after which the row is absorbed.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Dimensions of a model: `n` positions, alphabet `{0, ..., r-1}` and
/// hypothetical population size `K`.
///
/// `K` must be a multiple of `r` so that the uniform start `1/r` is a whole
/// number of `1/K` steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelParams {
    n: usize,
    r: usize,
    k: u32,
}

impl ModelParams {
    pub fn new(n: usize, r: usize, k: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if r < 2 {
            return Err(Error::InvalidParams(format!(
                "r must be at least 2, got {r}"
            )));
        }
        if r > u16::MAX as usize {
            return Err(Error::InvalidParams(format!("r={r} exceeds {}", u16::MAX)));
        }
        if k == 0 {
            return Err(Error::InvalidParams("K must be at least 1".into()));
        }
        if !(k as usize).is_multiple_of(r) {
            return Err(Error::IndivisibleK { r, k });
        }
        Ok(Self { n, r, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The top value `r - 1`, the optimum value of r-OneMax at every position.
    pub fn top(&self) -> u16 {
        (self.r - 1) as u16
    }
}

/// A candidate solution in `{0, ..., r-1}^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Individual(Vec<u16>);

impl Individual {
    pub fn new(values: Vec<u16>) -> Self {
        Self(values)
    }

    /// The constant string `(v, v, ..., v)` of length `n`.
    pub fn constant(n: usize, v: u16) -> Self {
        Self(vec![v; n])
    }

    pub fn values(&self) -> &[u16] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [u16] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks length `n` and that every entry is below `r`.
    pub fn validate(&self, n: usize, r: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: self.0.len(),
            });
        }
        match self.0.iter().position(|&v| v as usize >= r) {
            Some(position) => Err(Error::ValueOutOfRange {
                position,
                value: self.0[position],
                r,
            }),
            None => Ok(()),
        }
    }

    /// Draws a uniformly random string, used for random optima.
    pub fn random<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> Self {
        Self((0..n).map(|_| rng.random_range(0..r as u16)).collect())
    }
}

impl From<Vec<u16>> for Individual {
    fn from(values: Vec<u16>) -> Self {
        Self(values)
    }
}

/// Comma-separated integers, e.g. `2,0,1`.
impl fmt::Display for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, v) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Individual {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::default());
        }
        s.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u16>()
                    .map_err(|e| Error::Parse(format!("bad value {tok:?} in individual: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// A single count change `counts[position][value] += change`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountDelta {
    pub position: usize,
    pub value: u16,
    pub change: i8,
}

/// Maps 32 random bits to an exact uniform draw from `0..bound`
/// (Lemire's multiply-and-reject; the rare rejections redraw from `rng`).
#[inline]
fn scale_below<R: Rng + ?Sized>(bits: u32, bound: u32, rng: &mut R) -> u32 {
    let mut m = bits as u64 * bound as u64;
    if (m as u32) < bound {
        let threshold = bound.wrapping_neg() % bound;
        while (m as u32) < threshold {
            m = rng.next_u32() as u64 * bound as u64;
        }
    }
    (m >> 32) as u32
}

/// The `n x r` frequency matrix, held as counts in units of `1/K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyMatrix {
    params: ModelParams,
    counts: Vec<u32>,
}

impl FrequencyMatrix {
    /// Every frequency set to `1/r`.
    pub fn init_uniform(params: ModelParams) -> Self {
        let per_value = params.k / params.r as u32;
        let counts = vec![per_value; params.n * params.r];
        Self { params, counts }
    }

    /// Builds a model from explicit rows of counts; each row must have `r`
    /// entries summing to `K`.
    pub fn from_counts(params: ModelParams, rows: &[Vec<u32>]) -> Result<Self> {
        if rows.len() != params.n {
            return Err(Error::LengthMismatch {
                expected: params.n,
                got: rows.len(),
            });
        }
        let mut counts = Vec::with_capacity(params.n * params.r);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != params.r {
                return Err(Error::InvalidParams(format!(
                    "row {i} has {} entries, expected r={}",
                    row.len(),
                    params.r
                )));
            }
            let sum: u64 = row.iter().map(|&c| c as u64).sum();
            if sum != params.k as u64 {
                return Err(Error::InvalidParams(format!(
                    "row {i} sums to {sum}, expected K={}",
                    params.k
                )));
            }
            counts.extend_from_slice(row);
        }
        Ok(Self { params, counts })
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let r = self.params.r;
        &self.counts[i * r..(i + 1) * r]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.counts.chunks_exact(self.params.r)
    }

    pub fn count(&self, i: usize, j: usize) -> u32 {
        self.counts[i * self.params.r + j]
    }

    pub fn frequency(&self, i: usize, j: usize) -> f64 {
        self.count(i, j) as f64 / self.params.k as f64
    }

    /// `p_{i,r-1}` for every position.
    pub fn top_frequencies(&self) -> Vec<f64> {
        let top = self.params.r - 1;
        (0..self.params.n).map(|i| self.frequency(i, top)).collect()
    }

    /// Samples one individual; position `i` takes value `j` with probability
    /// `counts[i][j] / K`, independently across positions.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Individual {
        let mut out = Individual::constant(self.params.n, 0);
        self.sample_into(rng, &mut out);
        out
    }

    /// Like [`sample`](Self::sample) but reuses the buffer in `out`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Individual) {
        out.0.resize(self.params.n, 0);
        // fixed row widths let the prefix scan unroll
        match self.params.r {
            2 => self.sample_rows::<2, R>(rng, &mut out.0),
            3 => self.sample_rows::<3, R>(rng, &mut out.0),
            4 => self.sample_rows::<4, R>(rng, &mut out.0),
            5 => self.sample_rows::<5, R>(rng, &mut out.0),
            6 => self.sample_rows::<6, R>(rng, &mut out.0),
            7 => self.sample_rows::<7, R>(rng, &mut out.0),
            8 => self.sample_rows::<8, R>(rng, &mut out.0),
            9 => self.sample_rows::<9, R>(rng, &mut out.0),
            10 => self.sample_rows::<10, R>(rng, &mut out.0),
            _ => self.sample_rows::<0, R>(rng, &mut out.0),
        }
    }

    /// `WIDTH == 0` means "use the runtime `r`".
    fn sample_rows<const WIDTH: usize, R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u16]) {
        const BLOCK: usize = 64;
        let r = if WIDTH == 0 { self.params.r } else { WIDTH };
        let k = self.params.k;
        let mut draws = [0u32; BLOCK];
        for (slots, rows) in out.chunks_mut(BLOCK).zip(self.counts.chunks(BLOCK * r)) {
            let draws = &mut draws[..slots.len()];
            rng.fill(draws);
            for ((slot, &bits), row) in slots.iter_mut().zip(draws.iter()).zip(rows.chunks_exact(r))
            {
                let u = scale_below(bits, k, rng);
                // index of the first prefix sum exceeding u, without branches
                let mut acc = 0u32;
                let mut chosen = 0u16;
                for &c in &row[..r - 1] {
                    acc += c;
                    chosen += (u >= acc) as u16;
                }
                *slot = chosen;
            }
        }
    }

    /// Moves `1/K` of mass from the loser's value to the winner's value at
    /// every position where the two differ.
    pub fn update(&mut self, winner: &Individual, loser: &Individual) {
        self.update_tracking(winner, loser, None);
    }

    /// Branch-light update. If `watched` is given, returns how many cells
    /// `(i, watched[i])` dropped to zero in this update.
    pub(crate) fn update_tracking(
        &mut self,
        winner: &Individual,
        loser: &Individual,
        watched: Option<&[u16]>,
    ) -> usize {
        let (n, r) = (self.params.n, self.params.r);
        assert_eq!(winner.len(), n, "winner length");
        assert_eq!(loser.len(), n, "loser length");
        let mut zeroed = 0usize;
        for (i, (&w, &l)) in winner.0.iter().zip(loser.0.iter()).enumerate() {
            let moved = (w != l) as u32;
            let base = i * r;
            let lose_slot = &mut self.counts[base + l as usize];
            assert!(*lose_slot >= moved, "count underflow at ({i}, {l})");
            *lose_slot -= moved;
            if let Some(watched) = watched {
                zeroed += (moved == 1 && *lose_slot == 0 && watched[i] == l) as usize;
            }
            self.counts[base + w as usize] += moved;
        }
        zeroed
    }

    /// [`update`](Self::update), reporting each count change to `on_change`.
    pub fn update_with<F: FnMut(CountDelta)>(
        &mut self,
        winner: &Individual,
        loser: &Individual,
        mut on_change: F,
    ) {
        let (n, r) = (self.params.n, self.params.r);
        assert_eq!(winner.len(), n, "winner length");
        assert_eq!(loser.len(), n, "loser length");
        for (i, (&w, &l)) in winner.0.iter().zip(loser.0.iter()).enumerate() {
            if w == l {
                continue;
            }
            let base = i * r;
            let lose_slot = &mut self.counts[base + l as usize];
            // l was just sampled here, so its count is at least 1
            assert!(*lose_slot > 0, "count underflow at ({i}, {l})");
            *lose_slot -= 1;
            self.counts[base + w as usize] += 1;
            on_change(CountDelta {
                position: i,
                value: w,
                change: 1,
            });
            on_change(CountDelta {
                position: i,
                value: l,
                change: -1,
            });
        }
    }

    /// Checks row sums and ranges; always true for a model built through this API.
    pub fn check_invariants(&self) -> bool {
        let k = self.params.k;
        self.rows().all(|row| {
            row.iter().all(|&c| c <= k) && row.iter().map(|&c| c as u64).sum::<u64>() == k as u64
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(n: usize, r: usize, k: u32) -> ModelParams {
        ModelParams::new(n, r, k).unwrap()
    }

    #[test]
    fn uniform_init() {
        let m = FrequencyMatrix::init_uniform(params(2, 4, 8));
        assert!(m.rows().all(|row| row == [2, 2, 2, 2]));
        assert_eq!(m.frequency(1, 3), 0.25);

        let m = FrequencyMatrix::init_uniform(params(1, 2, 2));
        assert_eq!(m.row(0), &[1, 1]);
    }

    #[test]
    fn rejects_indivisible_k() {
        assert!(matches!(
            ModelParams::new(3, 3, 8),
            Err(Error::IndivisibleK { r: 3, k: 8 })
        ));
        assert!(ModelParams::new(0, 2, 2).is_err());
        assert!(ModelParams::new(1, 1, 2).is_err());
        assert!(ModelParams::new(1, 2, 0).is_err());
    }

    #[test]
    fn degenerate_rows_sample_deterministically() {
        let p = params(3, 3, 6);
        let m = FrequencyMatrix::from_counts(p, &vec![vec![0, 0, 6]; 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(m.sample(&mut rng).values(), &[2, 2, 2]);
        }

        let p = params(2, 2, 4);
        let m = FrequencyMatrix::from_counts(p, &[vec![4, 0], vec![0, 4]]).unwrap();
        for _ in 0..100 {
            assert_eq!(m.sample(&mut rng).values(), &[0, 1]);
        }
    }

    #[test]
    fn update_moves_one_unit() {
        let p = params(1, 3, 6);
        let mut m = FrequencyMatrix::init_uniform(p);
        m.update(&Individual::new(vec![2]), &Individual::new(vec![0]));
        assert_eq!(m.row(0), &[1, 2, 3]);
    }

    #[test]
    fn update_identity_when_equal() {
        let p = params(4, 3, 9);
        let mut m = FrequencyMatrix::init_uniform(p);
        let before = m.clone();
        let x = Individual::new(vec![0, 1, 2, 1]);
        m.update(&x, &x.clone());
        assert_eq!(m, before);
    }

    #[test]
    fn update_reaches_boundary() {
        let p = params(1, 2, 10);
        let mut m = FrequencyMatrix::from_counts(p, &[vec![1, 9]]).unwrap();
        m.update(&Individual::new(vec![1]), &Individual::new(vec![0]));
        assert_eq!(m.row(0), &[0, 10]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(m.sample(&mut rng).values(), &[1]);
    }

    #[test]
    #[should_panic(expected = "count underflow")]
    fn update_panics_on_unsampled_loser() {
        let p = params(1, 2, 2);
        let mut m = FrequencyMatrix::from_counts(p, &[vec![0, 2]]).unwrap();
        m.update(&Individual::new(vec![1]), &Individual::new(vec![0]));
    }

    #[test]
    fn from_counts_validates_rows() {
        let p = params(1, 2, 4);
        assert!(FrequencyMatrix::from_counts(p, &[vec![1, 2]]).is_err());
        assert!(FrequencyMatrix::from_counts(p, &[vec![4]]).is_err());
        assert!(FrequencyMatrix::from_counts(p, &[]).is_err());
    }

    #[test]
    fn individual_text_round_trip() {
        let x: Individual = "3, 0,12".parse().unwrap();
        assert_eq!(x.values(), &[3, 0, 12]);
        assert_eq!(x.to_string(), "3,0,12");
        assert!("1,a".parse::<Individual>().is_err());
        assert!(x.validate(3, 13).is_ok());
        assert!(matches!(
            x.validate(3, 4),
            Err(Error::ValueOutOfRange { position: 2, .. })
        ));
        assert!(x.validate(2, 13).is_err());
    }
}
