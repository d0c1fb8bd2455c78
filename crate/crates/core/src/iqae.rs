//! Iterative amplitude estimation.
//!
//! Keeps a confidence interval `[theta_lo, theta_hi]` and repeatedly:
//!
//! 1. picks the largest power `k` for which `(4k+2) [theta_lo, theta_hi]`
//!    sits inside one half-plane (`[0, pi]` or `[pi, 2pi]` modulo `2pi`),
//!    where `sin^2((2k+1) theta) = (1 - cos((4k+2) theta)) / 2` is monotonic;
//! 2. measures `Q^k A|0>`, pooling shots with earlier rounds at the same `k`;
//! 3. turns a Clopper-Pearson interval on the hit rate into an interval on
//!    `theta` by inverting the cosine, and intersects it with the old one.
//!
//! It stops once `sin^2(theta_hi) - sin^2(theta_lo) <= 2 epsilon`.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};
use core::fmt;

use rand::Rng;

use crate::backend::{measure_flag, Backend};
use crate::binomial::clopper_pearson;
use crate::math;
use crate::oracle::OracleSpec;

/// Interval on `theta`, always inside `[0, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    theta_lo: f64,
    theta_hi: f64,
}

impl ConfidenceInterval {
    /// Clamps both ends into `[0, pi/2]`.
    ///
    /// # Panics
    /// If `lo > hi` or either bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval bounds out of order: [{lo}, {hi}]");
        ConfidenceInterval {
            theta_lo: lo.clamp(0.0, FRAC_PI_2),
            theta_hi: hi.clamp(0.0, FRAC_PI_2),
        }
    }

    /// `[0, pi/2]`.
    pub fn full() -> Self {
        ConfidenceInterval::new(0.0, FRAC_PI_2)
    }

    pub fn theta_lo(&self) -> f64 {
        self.theta_lo
    }

    pub fn theta_hi(&self) -> f64 {
        self.theta_hi
    }

    pub fn width(&self) -> f64 {
        self.theta_hi - self.theta_lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.theta_lo + self.theta_hi)
    }

    /// `sin^2(theta_lo)`.
    pub fn a_lo(&self) -> f64 {
        math::sin_sq(self.theta_lo)
    }

    /// `sin^2(theta_hi)`.
    pub fn a_hi(&self) -> f64 {
        math::sin_sq(self.theta_hi)
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.theta_lo <= theta && theta <= self.theta_hi
    }

    /// `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &ConfidenceInterval) -> Option<ConfidenceInterval> {
        let lo = self.theta_lo.max(other.theta_lo);
        let hi = self.theta_hi.min(other.theta_hi);
        (lo <= hi).then_some(ConfidenceInterval {
            theta_lo: lo,
            theta_hi: hi,
        })
    }
}

/// Slack, in radians of the scaled angle, for endpoints that land on a
/// multiple of `pi` up to rounding (`theta = pi/2` scales to an odd multiple).
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Which half-plane `(4k+2) [theta_lo, theta_hi]` occupies for power `k`,
/// `Some(true)` for upper, `None` if it straddles a multiple of `pi` or is
/// wider than `pi`.
pub fn half_plane(ci: &ConfidenceInterval, k: u64) -> Option<bool> {
    let scale = (4 * k + 2) as f64;
    let lo = scale * ci.theta_lo;
    let hi = scale * ci.theta_hi;
    if hi - lo > PI + BOUNDARY_TOL {
        return None;
    }
    let mut turns = math::floor(lo / TAU);
    if lo - turns * TAU > TAU - BOUNDARY_TOL {
        turns += 1.0;
    }
    let lo = lo - turns * TAU;
    let hi = hi - turns * TAU;
    if hi <= PI + BOUNDARY_TOL {
        Some(true)
    } else if lo >= PI - BOUNDARY_TOL && hi <= TAU + BOUNDARY_TOL {
        Some(false)
    } else {
        None
    }
}

/// Half-plane of the scaled interval's midpoint; used when rounding puts an
/// endpoint a hair across a boundary.
fn midpoint_half_plane(ci: &ConfidenceInterval, k: u64) -> bool {
    let mid = (4 * k + 2) as f64 * ci.midpoint();
    mid - math::floor(mid / TAU) * TAU <= PI
}

/// Largest usable `Q` power for the next round.
///
/// Returns the largest `k` whose scaled interval fits one half-plane, unless
/// that `k` is below `ratio * k_current` (for `k_current >= 1`), in which
/// case the current power is kept. The flag reports the half-plane.
pub fn find_next_k(ci: &ConfidenceInterval, k_current: u64, ratio: u64) -> (u64, bool) {
    let keep = || {
        let upper = half_plane(ci, k_current).unwrap_or_else(|| midpoint_half_plane(ci, k_current));
        (k_current, upper)
    };
    let width = ci.width();
    if width <= 0.0 {
        return keep();
    }
    // (4k + 2) * width <= pi
    let max_scale = PI / width;
    if max_scale < 2.0 {
        return keep();
    }
    let k_max = math::floor((max_scale - 2.0) / 4.0) as u64;
    let k_min = if k_current == 0 {
        0
    } else {
        ratio.saturating_mul(k_current)
    };
    let mut k = k_max;
    while k >= k_min {
        if let Some(upper) = half_plane(ci, k) {
            return (k, upper);
        }
        if k == 0 {
            break;
        }
        k -= 1;
    }
    keep()
}

/// `floor((4k+2) theta_mid / 2pi)`: the period the scaled interval sits in.
pub fn winding_number(ci: &ConfidenceInterval, k: u64) -> u64 {
    math::floor((4 * k + 2) as f64 * ci.midpoint() / TAU) as u64
}

/// Maps bounds on `sin^2((2k+1) theta)` back to bounds on `theta`, given the
/// half-plane and winding number of the scaled angle.
pub fn invert_to_theta(
    p_lo: f64,
    p_hi: f64,
    k: u64,
    upper_half_plane: bool,
    winding: u64,
) -> ConfidenceInterval {
    let angle = |p: f64| math::acos((1.0 - 2.0 * p).clamp(-1.0, 1.0));
    let (lo, hi) = if upper_half_plane {
        (angle(p_lo), angle(p_hi))
    } else {
        (TAU - angle(p_hi), TAU - angle(p_lo))
    };
    let offset = TAU * winding as f64;
    let scale = (4 * k + 2) as f64;
    ConfidenceInterval::new((offset + lo) / scale, (offset + hi) / scale)
}

/// Rounds allowed by the confidence budget: `ceil(log2(pi / (8 epsilon))) + 1`.
pub fn max_rounds(epsilon: f64) -> u32 {
    let t = math::ceil(math::log2(PI / (8.0 * epsilon)));
    if t > 0.0 {
        t as u32 + 1
    } else {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IqaeConfig {
    /// Target half-width on `a`.
    pub epsilon: f64,
    /// Overall failure probability.
    pub alpha: f64,
    pub shots_per_round: u64,
    /// Minimum growth factor of `k` between distinct powers.
    pub ratio: u64,
}

impl IqaeConfig {
    pub fn new(epsilon: f64, alpha: f64, shots_per_round: u64) -> Self {
        IqaeConfig {
            epsilon,
            alpha,
            shots_per_round,
            ratio: 2,
        }
    }

    /// Per-round confidence level `alpha / T_max`.
    pub fn alpha_per_round(&self) -> f64 {
        self.alpha / max_rounds(self.epsilon) as f64
    }

    /// Rounds before giving up: `10 * T_max`.
    pub fn round_cap(&self) -> usize {
        10 * max_rounds(self.epsilon) as usize
    }

    fn validate(&self) -> Result<(), IqaeError> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(IqaeError::InvalidConfig("epsilon must lie in (0, 0.5)"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(IqaeError::InvalidConfig("alpha must lie in (0, 1)"));
        }
        if self.shots_per_round == 0 {
            return Err(IqaeError::InvalidConfig("shots per round must be positive"));
        }
        if self.ratio < 2 {
            return Err(IqaeError::InvalidConfig("growth ratio must be at least 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub k: u64,
    pub upper_half_plane: bool,
    /// Shots taken in this round alone.
    pub new_shots: u64,
    /// Shots pooled at this `k` so far, including this round.
    pub shots: u64,
    /// Hits pooled at this `k` so far.
    pub hits: u64,
    pub interval_after: ConfidenceInterval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IqaeReport {
    /// `sin^2` of the interval midpoint.
    pub a_hat: f64,
    pub a_lo: f64,
    pub a_hi: f64,
    pub interval: ConfidenceInterval,
    pub oracle_calls: u64,
    pub rounds: Vec<RoundRecord>,
    pub epsilon: f64,
    pub alpha: f64,
}

impl IqaeReport {
    fn from_state(
        interval: ConfidenceInterval,
        oracle_calls: u64,
        rounds: Vec<RoundRecord>,
        config: &IqaeConfig,
    ) -> Self {
        IqaeReport {
            a_hat: math::sin_sq(interval.midpoint()),
            a_lo: interval.a_lo(),
            a_hi: interval.a_hi(),
            interval,
            oracle_calls,
            rounds,
            epsilon: config.epsilon,
            alpha: config.alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IqaeError {
    InvalidConfig(&'static str),
    /// The round cap was hit before the interval got narrow enough.
    IterationCap(Box<IqaeReport>),
}

impl fmt::Display for IqaeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IqaeError::InvalidConfig(msg) => write!(f, "invalid IQAE configuration: {msg}"),
            IqaeError::IterationCap(report) => write!(
                f,
                "IQAE did not converge within {} rounds (a in [{}, {}])",
                report.rounds.len(),
                report.a_lo,
                report.a_hi
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for IqaeError {}

/// Runs iterative amplitude estimation to precision `config.epsilon` on `a`.
pub fn run_iqae<R: Rng + ?Sized>(
    oracle: &OracleSpec,
    config: &IqaeConfig,
    backend: Backend,
    rng: &mut R,
) -> Result<IqaeReport, IqaeError> {
    config.validate()?;
    let alpha_round = config.alpha_per_round();
    let cap = config.round_cap();

    let mut ci = ConfidenceInterval::full();
    let mut k = 0u64;
    let mut pooled_shots = 0u64;
    let mut pooled_hits = 0u64;
    let mut oracle_calls = 0u64;
    let mut rounds: Vec<RoundRecord> = Vec::new();

    while ci.a_hi() - ci.a_lo() > 2.0 * config.epsilon {
        if rounds.len() >= cap {
            return Err(IqaeError::IterationCap(Box::new(IqaeReport::from_state(
                ci,
                oracle_calls,
                rounds,
                config,
            ))));
        }

        let (next_k, upper) = find_next_k(&ci, k, config.ratio);
        if next_k != k || rounds.is_empty() {
            pooled_shots = 0;
            pooled_hits = 0;
        }
        k = next_k;
        let winding = winding_number(&ci, k);

        let hits = measure_flag(backend, oracle, k, config.shots_per_round, rng);
        pooled_shots += config.shots_per_round;
        pooled_hits += hits;
        oracle_calls += config.shots_per_round * (2 * k + 1);

        let (p_lo, p_hi) = clopper_pearson(pooled_hits, pooled_shots, alpha_round);
        let update = invert_to_theta(p_lo, p_hi, k, upper, winding);
        // A disjoint update means this round's bound missed; keep the old
        // interval and let further shots settle it.
        if let Some(next) = ci.intersect(&update) {
            ci = next;
        }

        rounds.push(RoundRecord {
            k,
            upper_half_plane: upper,
            new_shots: config.shots_per_round,
            shots: pooled_shots,
            hits: pooled_hits,
            interval_after: ci,
        });
    }

    Ok(IqaeReport::from_state(ci, oracle_calls, rounds, config))
}
