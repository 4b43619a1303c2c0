//! Seeded random streams.
//!
//! A [`Stream`] is a ChaCha8 generator (counter based, 64-bit seed expanded by
//! `rand_chacha`'s `seed_from_u64`). Child streams are named by a parent seed
//! and a list of integer tags: [`derive_seed`] folds the tags into the seed with
//! the SplitMix64 finalizer, so a stream depends only on its name and never on
//! how many other streams were created before it.
//!
//! Fixed conversions:
//! * uniform `[0, 1)`: top 53 bits of one 64-bit word times 2^-53;
//! * standard normal: Box–Muller, cosine branch, two uniforms per draw,
//!   `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)` evaluated with `libm`;
//! * integer below `n`: `floor(u * n)`, clamped to `n - 1`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Source of uniform draws used by every stochastic routine in the crate.
///
/// Only [`next_f64`](RandomSource::next_f64) must be provided; the derived
/// draws are defined on top of it so a scripted source in tests reproduces
/// exactly what a real stream would do with the same uniforms.
pub trait RandomSource {
    /// Uniform draw in `[0, 1)`.
    fn next_f64(&mut self) -> f64;

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        let i = (self.next_f64() * n as f64) as usize;
        i.min(n - 1)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    fn standard_normal(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        libm::sqrt(-2.0 * libm::log(1.0 - u1)) * libm::cos(core::f64::consts::TAU * u2)
    }
}

impl<R: RandomSource + ?Sized> RandomSource for &mut R {
    fn next_f64(&mut self) -> f64 {
        (**self).next_f64()
    }
}

#[derive(Debug, Clone)]
pub struct Stream(ChaCha8Rng);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Stream named by `seed` and `tags`, see [`derive_seed`].
    pub fn keyed(seed: u64, tags: &[u64]) -> Self {
        Stream::new(derive_seed(seed, tags))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
}

impl RandomSource for Stream {
    fn next_f64(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `tags` into `seed`: `s <- splitmix64(s ^ splitmix64(tag))` per tag.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(seed), |s, &t| splitmix64(s ^ splitmix64(t)))
}

/// 64-bit FNV-1a hash, used to turn names into stream tags.
pub fn name_tag(name: &str) -> u64 {
    name.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}
