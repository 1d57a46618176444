//! Fully specified counter-based pseudo-random generator.
//!
//! Every stochastic fixture in this crate (synthetic sources, benchmark
//! workloads, trainer initialization) draws from this generator so that a
//! seed reproduces the same values on every platform. The algorithm is
//! SplitMix64: the k-th output is `mix(seed + (k+1) * 0x9E3779B97F4A7C15)`
//! where `mix` is the 64-bit finalizer below. Uniform doubles take the top
//! 53 bits; normal deviates use the Box-Muller transform on two uniforms.

/// SplitMix64 stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Derives an independent stream for a sub-task, keeping call sites
    /// from accidentally sharing a sequence.
    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut squeeze = Self::new(seed ^ stream.wrapping_mul(0xA3EC647659359ACD));
        // Burn one output so nearby (seed, stream) pairs decorrelate.
        squeeze.next_u64();
        squeeze
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; used where a logarithm must stay finite.
    fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate via Box-Muller. Draws two uniforms per call;
    /// no spare is cached so the stream position stays easy to reason about.
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_f64_open();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform index in [0, n) by 128-bit widening multiply.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_index(i + 1);
            items.swap(i, j);
        }
    }
}
