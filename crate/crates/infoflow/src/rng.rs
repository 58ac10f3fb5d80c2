//! Small counter-style pseudo-random generator with an explicit 64-bit seed.
//!
//! The reproducibility contract of the whole crate rests on this generator:
//! the same seed must yield the same stream, on every platform, across
//! releases. External RNG crates do not pin their streams across versions.

/// SplitMix64 stream generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform draw from [0, 1) with 53 random mantissa bits.
    #[inline]
    pub fn uniform01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw from [lo, hi).
    #[inline]
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform01()
    }

    /// Unbiased index draw from 0..n via the fixed-point multiply trick.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Standard normal draw (Box-Muller, one value per call).
    pub fn standard_normal(&mut self) -> f64 {
        // uniform01 can return 0; shift into (0, 1] for the log.
        let u1 = 1.0 - self.uniform01();
        let u2 = self.uniform01();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Derive an independent stream seed from a base seed and a stream label.
///
/// Used to hand out per-shard and per-sweep-point generators that are
/// deterministic in (seed, label) and uncorrelated with each other.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    mix(seed ^ stream.wrapping_mul(GAMMA).wrapping_add(GAMMA))
}
