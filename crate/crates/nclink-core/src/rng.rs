//! Counter-based random streams for reproducible Monte Carlo.
//!
//! Every simulated block derives its randomness from `(seed, block, role)`
//! alone, so a sweep gives bit-identical results no matter how blocks are
//! scheduled across worker threads, and different schemes evaluated on the
//! same `(seed, block)` see the same channel (common random numbers).
//!
//! The generator is a keyed splitmix64: the key is a triple hash of seed,
//! block index and role, and each output is the splitmix64 finalizer applied
//! to `key + i * GAMMA`. That is a pure counter construction with no shared
//! state between streams.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// What a stream is used for within one simulated block.
///
/// Keeping roles on separate streams means e.g. adding one more fading draw
/// never shifts the noise sequence, which keeps paired comparisons paired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamRole {
    /// User positions inside the cell.
    Placement,
    /// Log-normal shadowing terms.
    Shadowing,
    /// Small-scale fading coefficients.
    Fading,
    /// Additive receiver noise.
    Noise,
    /// Information bits / symbol labels.
    Data,
}

impl StreamRole {
    fn tag(self) -> u64 {
        match self {
            StreamRole::Placement => 1,
            StreamRole::Shadowing => 2,
            StreamRole::Fading => 3,
            StreamRole::Noise => 4,
            StreamRole::Data => 5,
        }
    }
}

/// Factory for the per-role streams of one `(seed, block)` pair.
#[derive(Debug, Clone, Copy)]
pub struct BlockStreams {
    seed: u64,
    block: u64,
}

impl BlockStreams {
    pub fn new(seed: u64, block: u64) -> Self {
        BlockStreams { seed, block }
    }

    /// The stream for `role`; calling twice returns identical streams.
    pub fn stream(&self, role: StreamRole) -> StreamRng {
        StreamRng::from_key(self.seed, self.block, role)
    }
}

/// One deterministic random stream.
#[derive(Debug, Clone)]
pub struct StreamRng {
    state: u64,
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl StreamRng {
    pub fn from_key(seed: u64, block: u64, role: StreamRole) -> Self {
        let mut h = mix64(seed.wrapping_add(GAMMA));
        h = mix64(h ^ block.wrapping_mul(GAMMA));
        h = mix64(h ^ role.tag().wrapping_mul(GAMMA));
        StreamRng { state: h }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in `(0, 1]`; safe as a logarithm argument.
    fn next_f64_open_low(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }

    /// One fair bit (the top bit of the next word).
    pub fn next_bit(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// A pair of independent standard normals (Box-Muller).
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_f64_open_low();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * core::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// One standard normal. Draws a full pair; use
    /// [`next_gaussian_pair`](Self::next_gaussian_pair) when consuming many.
    pub fn next_gaussian(&mut self) -> f64 {
        self.next_gaussian_pair().0
    }

    /// Circularly symmetric complex Gaussian with `E|z|^2 = variance`.
    pub fn next_cscg(&mut self, variance: f64) -> Complex64 {
        let (re, im) = self.next_gaussian_pair();
        let s = (0.5 * variance).sqrt();
        Complex64::new(s * re, s * im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_deterministic() {
        let mut a = BlockStreams::new(7, 42).stream(StreamRole::Noise);
        let mut b = BlockStreams::new(7, 42).stream(StreamRole::Noise);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn roles_and_blocks_give_distinct_streams() {
        let s = BlockStreams::new(7, 42);
        let first = |mut r: StreamRng| r.next_u64();
        let noise = first(s.stream(StreamRole::Noise));
        assert_ne!(noise, first(s.stream(StreamRole::Fading)));
        assert_ne!(noise, first(BlockStreams::new(7, 43).stream(StreamRole::Noise)));
        assert_ne!(noise, first(BlockStreams::new(8, 42).stream(StreamRole::Noise)));
    }

    #[test]
    fn uniforms_are_in_range_and_weakly_correlated() {
        let mut r = BlockStreams::new(1, 0).stream(StreamRole::Data);
        let n = 100_000;
        let mut prev = r.next_f64();
        let (mut sum, mut sum_sq, mut cross) = (prev, prev * prev, 0.0);
        for _ in 1..n {
            let x = r.next_f64();
            assert!((0.0..1.0).contains(&x));
            sum += x;
            sum_sq += x * x;
            cross += prev * x;
            prev = x;
        }
        let nf = n as f64;
        let mean = sum / nf;
        let var = sum_sq / nf - mean * mean;
        let lag1 = (cross / (nf - 1.0) - mean * mean) / var;
        assert!((mean - 0.5).abs() < 0.005, "mean {mean}");
        assert!((var - 1.0 / 12.0).abs() < 0.002, "var {var}");
        assert!(lag1.abs() < 0.01, "lag-1 correlation {lag1}");
    }

    #[test]
    fn gaussians_have_standard_moments() {
        let mut r = BlockStreams::new(3, 9).stream(StreamRole::Fading);
        let n = 100_000;
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..n {
            let (a, b) = r.next_gaussian_pair();
            sum += a + b;
            sum_sq += a * a + b * b;
        }
        let nf = (2 * n) as f64;
        let mean = sum / nf;
        let var = sum_sq / nf - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn cscg_has_requested_power_and_circular_symmetry() {
        let mut r = BlockStreams::new(3, 9).stream(StreamRole::Noise);
        let n = 100_000;
        let v = 2.5;
        let (mut pow, mut re_im) = (0.0, 0.0);
        for _ in 0..n {
            let z = r.next_cscg(v);
            pow += z.norm_sqr();
            re_im += z.re * z.im;
        }
        assert!((pow / n as f64 - v).abs() < 0.05, "power {}", pow / n as f64);
        assert!((re_im / n as f64).abs() < 0.05);
    }
}
