//! Uniquely decomposable QAM sub-constellations.
//!
//! For `K` users and a scale `d > 0`, sub-constellation `k` (0-based here,
//! `k = 0..K`) is the four-point set
//!
//! ```text
//! X_k = { (s_re/2 + i s_im/2) * 2^k * d : s_re, s_im in {+1, -1} }
//! ```
//!
//! i.e. a QPSK ring of radius `2^k * d / sqrt(2)`. Their Minkowski sum is the
//! square `4^K`-QAM constellation with minimum distance `d`, and the sum is
//! *uniquely decomposable*: every sum point splits into its `K` addends in
//! exactly one way, which is what lets a receiver read all users' bits off a
//! single complex decision.
//!
//! Bit convention: user `k` contributes two bits, `word[2k]` for the real
//! axis and `word[2k + 1]` for the imaginary axis, with `false` mapping to
//! the positive half-plane. The integer index of a word packs `word[j]` into
//! bit `j`, so `sum_points()[word.to_index()]` is the sum symbol of `word`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::rng::StreamRng;
use crate::Result;

/// Relative (to `d`) tolerance used when checking that a point sits on the
/// sum-constellation grid.
pub const GRID_TOL: f64 = 1e-9;

/// Largest supported user count; `4^K` sum points are materialized.
pub const MAX_USERS: usize = 10;

/// A plain bit vector with the packing convention described at module level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitWord {
    bits: Vec<bool>,
}

impl BitWord {
    pub fn new(bits: Vec<bool>) -> Self {
        BitWord { bits }
    }

    /// Word of `len` bits with `bits[j] = (index >> j) & 1`.
    pub fn from_index(index: usize, len: usize) -> Self {
        BitWord { bits: (0..len).map(|j| (index >> j) & 1 == 1).collect() }
    }

    pub fn to_index(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &b)| acc | (usize::from(b) << j))
    }

    /// `len` independent fair bits from `rng`.
    pub fn random(rng: &mut StreamRng, len: usize) -> Self {
        BitWord { bits: (0..len).map(|_| rng.next_bit()).collect() }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of differing bits. Panics on length mismatch (caller bug).
    pub fn hamming_distance(&self, other: &BitWord) -> usize {
        assert_eq!(self.bits.len(), other.bits.len(), "word length mismatch");
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count()
    }
}

/// Normalized per-symbol energy of sub-constellation `level` (0-based):
/// every point of `X_level` has `|x|^2 = energy_coefficient(level) * d^2`.
pub fn energy_coefficient(level: usize) -> f64 {
    // |x|^2 = 2 * (2^level * d / 2)^2 = 4^level / 2 * d^2.
    0.5 * (2.0 * level as f64).exp2()
}

/// The `K` sub-constellations for a given scale, plus the materialized sum
/// constellation.
#[derive(Debug, Clone)]
pub struct SubConstellationSet {
    users: usize,
    min_distance: f64,
    subsets: Vec<[Complex64; 4]>,
    sum_points: Vec<Complex64>,
}

impl SubConstellationSet {
    pub fn new(users: usize, min_distance: f64) -> Result<Self> {
        if users == 0 {
            return Err(Error::InvalidArgument("user count must be positive"));
        }
        if users > MAX_USERS {
            return Err(Error::UnsupportedSize("too many users for sum enumeration"));
        }
        if !(min_distance > 0.0) || !min_distance.is_finite() {
            return Err(Error::InvalidArgument("min distance must be positive and finite"));
        }
        let subsets: Vec<[Complex64; 4]> = (0..users)
            .map(|level| {
                let half = (level as f64).exp2() * min_distance * 0.5;
                // Local index i: bit 0 flips the real sign, bit 1 the imaginary.
                [
                    Complex64::new(half, half),
                    Complex64::new(-half, half),
                    Complex64::new(half, -half),
                    Complex64::new(-half, -half),
                ]
            })
            .collect();
        let total = 1usize << (2 * users);
        let mut sum_points = vec![Complex64::new(0.0, 0.0); total];
        for (index, point) in sum_points.iter_mut().enumerate() {
            *point = (0..users).map(|level| subsets[level][(index >> (2 * level)) & 3]).sum();
        }
        Ok(SubConstellationSet { users, min_distance, subsets, sum_points })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    /// The four points of sub-constellation `level` (0-based), indexed by the
    /// user's two bits as `re_bit | im_bit << 1`.
    pub fn subset(&self, level: usize) -> &[Complex64; 4] {
        &self.subsets[level]
    }

    /// All `4^users` sum points, indexed by [`BitWord::to_index`].
    pub fn sum_points(&self) -> &[Complex64] {
        &self.sum_points
    }

    /// Splits a sum point into its per-level addends (level 0 first).
    ///
    /// Points farther than [`GRID_TOL`]` * d` from the grid are rejected.
    pub fn decompose(&self, point: Complex64) -> Result<Vec<Complex64>> {
        self.check_on_grid(point)?;
        let mut residual = point;
        let mut parts = vec![Complex64::new(0.0, 0.0); self.users];
        // The top level dominates the residual sign: the lower levels sum to
        // less than half its amplitude, so peeling from the top is exact.
        for level in (0..self.users).rev() {
            let half = (level as f64).exp2() * self.min_distance * 0.5;
            let part = Complex64::new(
                if residual.re >= 0.0 { half } else { -half },
                if residual.im >= 0.0 { half } else { -half },
            );
            parts[level] = part;
            residual -= part;
        }
        if residual.norm() > 2.0 * self.users as f64 * GRID_TOL * self.min_distance {
            return Err(Error::InternalConsistency("nonzero residual after decomposition"));
        }
        Ok(parts)
    }

    /// Like [`decompose`](Self::decompose) but returns the word index.
    pub fn decompose_index(&self, point: Complex64) -> Result<usize> {
        let parts = self.decompose(point)?;
        let mut index = 0usize;
        for (level, part) in parts.iter().enumerate() {
            index |= usize::from(part.re < 0.0) << (2 * level);
            index |= usize::from(part.im < 0.0) << (2 * level + 1);
        }
        Ok(index)
    }

    /// Per-level symbols for a word of `2 * users` bits.
    pub fn map_bits(&self, word: &BitWord) -> Result<Vec<Complex64>> {
        if word.len() != 2 * self.users {
            return Err(Error::DimensionMismatch("word length must be 2 * users"));
        }
        Ok((0..self.users)
            .map(|level| {
                let local =
                    usize::from(word.bits[2 * level]) | usize::from(word.bits[2 * level + 1]) << 1;
                self.subsets[level][local]
            })
            .collect())
    }

    /// Inverse of [`map_bits`](Self::map_bits); the symbols must be actual
    /// sub-constellation points.
    pub fn demap_bits(&self, symbols: &[Complex64]) -> Result<BitWord> {
        if symbols.len() != self.users {
            return Err(Error::DimensionMismatch("one symbol per user expected"));
        }
        let tol = GRID_TOL * self.min_distance;
        let mut bits = vec![false; 2 * self.users];
        for (level, &s) in symbols.iter().enumerate() {
            let re_bit = s.re < 0.0;
            let im_bit = s.im < 0.0;
            let reference = self.subsets[level][usize::from(re_bit) | usize::from(im_bit) << 1];
            if (s - reference).norm() > tol {
                return Err(Error::NotAConstellationPoint);
            }
            bits[2 * level] = re_bit;
            bits[2 * level + 1] = im_bit;
        }
        Ok(BitWord::new(bits))
    }

    /// Both coordinates must be odd multiples of `d / 2` no larger than
    /// `(2^users - 1) * d / 2`.
    fn check_on_grid(&self, point: Complex64) -> Result<()> {
        let half = self.min_distance * 0.5;
        let max_odd = (self.users as f64).exp2() - 1.0;
        for v in [point.re, point.im] {
            let u = v / half;
            let odd = 2.0 * ((u - 1.0) * 0.5).round() + 1.0;
            if (v - odd * half).abs() > GRID_TOL * self.min_distance || odd.abs() > max_odd {
                return Err(Error::NotAConstellationPoint);
            }
        }
        Ok(())
    }
}
