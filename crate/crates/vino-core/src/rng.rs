//! Deterministic random number generation.
//!
//! Every stochastic component (road phases, damage fields, parameter
//! init, batch shuffling) draws from a splitmix64 stream seeded from a
//! root seed. The stream is fully specified here, so datasets and
//! checkpoints are byte-identical across runs and platforms.

/// splitmix64 finalizer; also the per-index seed derivation
/// `derive_seed(root, i) = finalize(root + (i + 1) * GOLDEN)`.
const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed for sub-stream `index` from a root seed.
///
/// Used to hand independent seeds to parallel dataset samples so the
/// result does not depend on scheduling order.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    finalize(root.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// splitmix64 generator.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
    cached_gauss: Option<f64>,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            cached_gauss: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        finalize(self.state)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box-Muller (pairs cached).
    pub fn gauss(&mut self) -> f64 {
        if let Some(g) = self.cached_gauss.take() {
            return g;
        }
        // u1 in (0, 1] to keep the log finite
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.cached_gauss = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = (self.next_u64() % (i as u64 + 1)) as usize;
            items.swap(i, j);
        }
    }
}
