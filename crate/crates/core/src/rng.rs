//! Explicitly seeded, splittable deterministic randomness.
//!
//! All "probabilistic" checks in this crate draw from a ChaCha20 stream
//! seeded by the caller; a (seed, stream) pair fully determines every draw,
//! so reported statuses are reproducible. Streams are the splitting
//! mechanism: independent consumers take distinct stream indices.

use num_bigint::BigInt;
use rand_core::{RngCore, SeedableRng};

use crate::field::Rational;

#[derive(Clone)]
pub struct DetRng {
    rng: rand_chacha::ChaCha20Rng,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng {
            rng: rand_chacha::ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Independent substream `index` of the same seed.
    pub fn split(seed: u64, index: u64) -> Self {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(index);
        DetRng { rng }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in 0..n.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.rng.next_u64() % n
    }

    /// Small integer in [-bound, bound].
    pub fn small_int(&mut self, bound: i64) -> i64 {
        let span = (2 * bound + 1) as u64;
        self.below(span) as i64 - bound
    }

    /// Small nonzero integer in [-bound, bound] \ {0}.
    pub fn small_nonzero_int(&mut self, bound: i64) -> i64 {
        loop {
            let v = self.small_int(bound);
            if v != 0 {
                return v;
            }
        }
    }

    /// Rational with numerator in [-bound, bound] and denominator in
    /// [1, den_bound].
    pub fn rational(&mut self, bound: i64, den_bound: i64) -> Rational {
        let n = self.small_int(bound);
        let d = 1 + self.below(den_bound as u64) as i64;
        Rational::new(BigInt::from(n), BigInt::from(d)).expect("nonzero denominator")
    }

    /// Point of `n` small integer coordinates.
    pub fn int_point(&mut self, n: usize, bound: i64) -> alloc::vec::Vec<Rational> {
        (0..n).map(|_| Rational::from_int(self.small_int(bound))).collect()
    }
}
