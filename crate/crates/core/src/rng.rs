//! Seeded instance generation.
//!
//! All randomness comes from SplitMix64 with its 64-bit state set to the
//! seed. Trial `t` of a run seeded with `s` uses the seed
//! `s + t * 0x9E3779B97F4A7C15 (mod 2^64)`. Entries in `[-B, B]` are drawn as
//! `next_u64() % (2B + 1) - B`, booleans with probability `p` as
//! `(next_u64() >> 11) * 2^-53 < p`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::bigint::Int;
use crate::matrix::IntMatrix;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub struct InstanceRng(SplitMix64);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng(SplitMix64::seed_from_u64(seed))
    }

    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Self::new(trial_seed(seed, trial))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish in `[0, n)` by modular reduction; `n > 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn int_in(&mut self, bmax: u64) -> i64 {
        (self.next_u64() % (2 * bmax + 1)) as i64 - bmax as i64
    }

    pub fn chance(&mut self, p: f64) -> bool {
        ((self.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
    }

    /// Row-major matrix with entries in `[-bmax, bmax]`.
    pub fn matrix(&mut self, rows: usize, cols: usize, bmax: u64) -> IntMatrix {
        IntMatrix::from_fn(rows, cols, |_, _| Int::from(self.int_in(bmax)))
    }
}

pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_add(trial.wrapping_mul(GOLDEN))
}
