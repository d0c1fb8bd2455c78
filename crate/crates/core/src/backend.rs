//! Flag-qubit sampling for `Q^m A|0>`.

use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::math;
use crate::oracle::OracleSpec;
use crate::statevector::simulated_flag_probability;

/// How the flag probability of a circuit is obtained before sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Full statevector simulation of `Q^m A|0>`.
    Statevector,
    /// Closed form `sin^2((2m+1) theta)`.
    #[default]
    Analytic,
}

impl Backend {
    /// Flag-1 probability of `Q^m A|0>` under this backend.
    pub fn flag_probability(self, oracle: &OracleSpec, m: u64) -> f64 {
        match self {
            Backend::Statevector => simulated_flag_probability(oracle, m),
            Backend::Analytic => analytic_flag_probability(oracle, m),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Statevector => "sv",
            Backend::Analytic => "analytic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownBackend;

impl fmt::Display for UnknownBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("backend must be `sv` or `analytic`")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for UnknownBackend {}

impl FromStr for Backend {
    type Err = UnknownBackend;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sv" | "statevector" => Ok(Backend::Statevector),
            "analytic" => Ok(Backend::Analytic),
            _ => Err(UnknownBackend),
        }
    }
}

/// `sin^2((2m+1) arcsin(sqrt(a)))`.
pub fn analytic_flag_probability(oracle: &OracleSpec, m: u64) -> f64 {
    flag_probability_at(oracle.theta(), m)
}

/// `sin^2((2m+1) theta)` for an arbitrary angle.
#[inline]
pub fn flag_probability_at(theta: f64, m: u64) -> f64 {
    math::sin_sq((2 * m + 1) as f64 * theta)
}

/// Number of successes in `shots` Bernoulli(`p`) trials, one uniform per shot.
pub fn sample_binomial<R: Rng + ?Sized>(shots: u64, p: f64, rng: &mut R) -> u64 {
    let p = p.clamp(0.0, 1.0);
    (0..shots).filter(|_| rng.random::<f64>() < p).count() as u64
}

/// Measures the flag of `Q^m A|0>` `shots` times and returns the hit count.
pub fn measure_flag<R: Rng + ?Sized>(
    backend: Backend,
    oracle: &OracleSpec,
    m: u64,
    shots: u64,
    rng: &mut R,
) -> u64 {
    sample_binomial(shots, backend.flag_probability(oracle, m), rng)
}
