//! Classical hit-or-miss Monte Carlo integration of a constant function
//! `f(x) = a` on `[0, 1]`.
//!
//! Each sample draws `(x, y)` uniformly from the unit square and counts a
//! hit when `y < f(x)`. One sample costs one oracle call.

use alloc::vec::Vec;

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MciConfig {
    /// Integral of the target, in `[0, 1]`.
    pub a_true: f64,
    pub samples: u64,
    pub repetitions: u64,
    pub seed: u64,
}

/// One hit-or-miss estimate from `samples` points.
pub fn mci_estimate<R: Rng + ?Sized>(a_true: f64, samples: u64, rng: &mut R) -> f64 {
    let mut hits = 0u64;
    for _ in 0..samples {
        let _x: f64 = rng.random();
        let y: f64 = rng.random();
        if y < a_true {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}

/// `config.repetitions` independent estimates drawn from one stream.
/// `config.seed` is ignored here; callers that need per-repetition streams
/// derive them from it.
pub fn run_mci<R: Rng + ?Sized>(config: &MciConfig, rng: &mut R) -> Vec<f64> {
    (0..config.repetitions)
        .map(|_| mci_estimate(config.a_true, config.samples, rng))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_integral_never_hits() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cfg = MciConfig {
            a_true: 0.0,
            samples: 512,
            repetitions: 20,
            seed: 0,
        };
        assert!(run_mci(&cfg, &mut rng).iter().all(|&e| e == 0.0));
    }

    #[test]
    fn unit_integral_always_hits() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(mci_estimate(1.0, 300, &mut rng), 1.0);
    }

    #[test]
    fn estimates_are_grid_fractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = MciConfig {
            a_true: 0.125,
            samples: 1024,
            repetitions: 50,
            seed: 4,
        };
        for e in run_mci(&cfg, &mut rng) {
            assert_eq!((e * 1024.0).fract(), 0.0);
            assert!((0.0..=1.0).contains(&e));
        }
    }
}
