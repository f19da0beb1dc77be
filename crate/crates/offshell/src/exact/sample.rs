use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Scalar;

/// Largest numerator/denominator drawn for a random rational.
pub const SAMPLE_BOUND: i64 = 10_000;

/// Deterministic source of generic rational sample points.
///
/// Every stream is keyed by `(seed, stream)`, so independent tasks can draw
/// their own points without sharing state; results never depend on how tasks
/// are scheduled.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng }
    }

    /// A positive rational `p/q` with `1 ≤ p, q ≤ 10^4`.
    pub fn scalar(&mut self) -> Scalar {
        let p = self.rng.gen_range(1..=SAMPLE_BOUND);
        let q = self.rng.gen_range(1..=SAMPLE_BOUND);
        Scalar::frac(p, q).expect("nonzero denominator")
    }

    /// A sample for the deformation parameter: avoids `q = ±1` and `q = 0`.
    pub fn generic_q(&mut self) -> Scalar {
        loop {
            let q = self.scalar();
            if !q.is_one() {
                return q;
            }
        }
    }

    /// `n` pairwise distinct scalars.
    pub fn distinct(&mut self, n: usize) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = Vec::with_capacity(n);
        while out.len() < n {
            let x = self.scalar();
            if !out.contains(&x) {
                out.push(x);
            }
        }
        out
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}
