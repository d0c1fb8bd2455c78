//! Maximum-likelihood amplitude estimation.
//!
//! A schedule of circuits `Q^{m_k} A|0>` is sampled, each yielding `h_k` hits
//! out of `N_k` shots. The estimate is the `theta` in `[0, pi/2]` maximizing
//!
//! ```text
//! log L(theta) = sum_k  h_k ln sin^2((2 m_k + 1) theta) + (N_k - h_k) ln cos^2((2 m_k + 1) theta)
//! ```
//!
//! The likelihood oscillates faster as the powers grow, so the search is a
//! dense uniform grid followed by golden-section refinement around the best
//! grid point.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::backend::{measure_flag, Backend};
use crate::math;
use crate::optimize::golden_section_maximize;
use crate::oracle::OracleSpec;

/// Grid resolution of the coarse maximization stage.
pub const GRID_POINTS: usize = 100_000;
/// Absolute tolerance in `theta` of the refinement stage.
pub const REFINE_TOL: f64 = 1e-10;
/// Floor applied inside the logarithm so boundary zeros stay finite.
pub const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScheduleKind {
    /// Exponential: `0, 1, 2, 4, ..., 2^(m-1)`.
    #[default]
    Eis,
    /// Linear: `0, 1, 2, ..., m`.
    Lis,
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScheduleKind::Eis => "eis",
            ScheduleKind::Lis => "lis",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownScheduleKind;

impl fmt::Display for UnknownScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("schedule must be `eis` or `lis`")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for UnknownScheduleKind {}

impl FromStr for ScheduleKind {
    type Err = UnknownScheduleKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eis" => Ok(ScheduleKind::Eis),
            "lis" => Ok(ScheduleKind::Lis),
            _ => Err(UnknownScheduleKind),
        }
    }
}

/// The list of `Q` powers, one circuit each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    kind: ScheduleKind,
    depth: u32,
    powers: Vec<u64>,
}

impl Schedule {
    pub fn new(kind: ScheduleKind, depth: u32) -> Self {
        match kind {
            ScheduleKind::Eis => eis_schedule(depth),
            ScheduleKind::Lis => lis_schedule(depth),
        }
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    /// The depth parameter `m`.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn powers(&self) -> &[u64] {
        &self.powers
    }
}

/// `[0, 1, 2, 4, ..., 2^(m-1)]`, `m + 1` circuits.
///
/// # Panics
/// If `m > 63`.
pub fn eis_schedule(m: u32) -> Schedule {
    assert!(m <= 63, "EIS depth {m} overflows a 64-bit Q power");
    let powers = core::iter::once(0)
        .chain((0..m).map(|k| 1u64 << k))
        .collect();
    Schedule {
        kind: ScheduleKind::Eis,
        depth: m,
        powers,
    }
}

/// `[0, 1, ..., m]`.
pub fn lis_schedule(m: u32) -> Schedule {
    Schedule {
        kind: ScheduleKind::Lis,
        depth: m,
        powers: (0..=m as u64).collect(),
    }
}

/// `shots * sum_k (2 m_k + 1)`: each `Q` holds one `A` and one `A^-1`.
pub fn oracle_call_count(schedule: &Schedule, shots: u64) -> u64 {
    shots * schedule.powers.iter().map(|m| 2 * m + 1).sum::<u64>()
}

/// Evidence from one circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementRecord {
    /// Power of `Q`.
    pub power: u64,
    pub shots: u64,
    pub hits: u64,
}

impl MeasurementRecord {
    /// # Panics
    /// If `hits > shots`.
    pub fn new(power: u64, shots: u64, hits: u64) -> Self {
        assert!(hits <= shots, "hit count {hits} exceeds {shots} shots");
        MeasurementRecord { power, shots, hits }
    }
}

#[inline]
fn clamped_ln(x: f64) -> f64 {
    math::ln(x.max(LOG_FLOOR))
}

/// Joint log-likelihood of `records` at angle `theta`.
pub fn log_likelihood(records: &[MeasurementRecord], theta: f64) -> f64 {
    records
        .iter()
        .map(|r| {
            let angle = (2 * r.power + 1) as f64 * theta;
            let (s, c) = (math::sin(angle), math::cos(angle));
            let mut ll = 0.0;
            if r.hits > 0 {
                ll += r.hits as f64 * clamped_ln(s * s);
            }
            if r.shots > r.hits {
                ll += (r.shots - r.hits) as f64 * clamped_ln(c * c);
            }
            ll
        })
        .sum()
}

/// Angle of the `i`-th coarse grid point.
#[inline]
pub fn grid_theta(i: usize) -> f64 {
    FRAC_PI_2 * (i as f64 / (GRID_POINTS - 1) as f64)
}

/// Global maximizer of [`log_likelihood`] over `[0, pi/2]`.
///
/// Scans [`GRID_POINTS`] equally spaced angles (ties go to the smallest
/// angle), then refines by golden section on the two neighbouring grid
/// cells. The result is never worse than the best grid point.
///
/// # Panics
/// If `records` is empty.
pub fn maximize_likelihood(records: &[MeasurementRecord]) -> f64 {
    assert!(
        !records.is_empty(),
        "maximum likelihood needs at least one record"
    );

    let mut best_i = 0;
    let mut best_ll = f64::NEG_INFINITY;
    for i in 0..GRID_POINTS {
        let ll = log_likelihood(records, grid_theta(i));
        if ll > best_ll {
            best_ll = ll;
            best_i = i;
        }
    }

    let lo = grid_theta(best_i.saturating_sub(1));
    let hi = grid_theta((best_i + 1).min(GRID_POINTS - 1));
    let (theta, ll) = golden_section_maximize(|t| log_likelihood(records, t), lo, hi, REFINE_TOL);
    if ll > best_ll {
        theta
    } else {
        grid_theta(best_i)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlqaeReport {
    pub theta_hat: f64,
    /// `sin^2(theta_hat)`.
    pub a_hat: f64,
    pub oracle_calls: u64,
    pub records: Vec<MeasurementRecord>,
    pub log_likelihood_at_max: f64,
}

/// Samples every circuit of the `kind` schedule with depth `m`, `shots`
/// times each, and returns the maximum-likelihood estimate.
pub fn run_mlqae<R: Rng + ?Sized>(
    oracle: &OracleSpec,
    m: u32,
    shots: u64,
    kind: ScheduleKind,
    backend: Backend,
    rng: &mut R,
) -> MlqaeReport {
    let schedule = Schedule::new(kind, m);
    let records: Vec<MeasurementRecord> = schedule
        .powers()
        .iter()
        .map(|&power| {
            let hits = measure_flag(backend, oracle, power, shots, rng);
            MeasurementRecord::new(power, shots, hits)
        })
        .collect();
    let theta_hat = maximize_likelihood(&records);
    MlqaeReport {
        theta_hat,
        a_hat: math::sin_sq(theta_hat),
        oracle_calls: oracle_call_count(&schedule, shots),
        log_likelihood_at_max: log_likelihood(&records, theta_hat),
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::theta_from_amplitude;

    #[test]
    fn schedules() {
        assert_eq!(eis_schedule(3).powers(), &[0, 1, 2, 4]);
        assert_eq!(eis_schedule(4).powers(), &[0, 1, 2, 4, 8]);
        assert_eq!(eis_schedule(0).powers(), &[0]);
        assert_eq!(lis_schedule(3).powers(), &[0, 1, 2, 3]);
        assert_eq!(lis_schedule(0).powers(), &[0]);
        assert_eq!(
            Schedule::new(ScheduleKind::Eis, 2).kind(),
            ScheduleKind::Eis
        );
    }

    #[test]
    fn call_counts() {
        assert_eq!(oracle_call_count(&eis_schedule(3), 1), 18);
        assert_eq!(oracle_call_count(&eis_schedule(4), 1), 35);
        assert_eq!(oracle_call_count(&eis_schedule(0), 64), 64);
        assert_eq!(oracle_call_count(&eis_schedule(3), 1024), 18_432);
    }

    #[test]
    fn log_likelihood_boundaries() {
        let all_hits = [MeasurementRecord::new(0, 10, 10)];
        assert!(log_likelihood(&all_hits, FRAC_PI_2).abs() < 1e-12);
        let no_hits = [MeasurementRecord::new(0, 10, 0)];
        assert_eq!(log_likelihood(&no_hits, 0.0), 0.0);
        let near = log_likelihood(&no_hits, 1e-6);
        assert!(near < 0.0 && near > -1e-9);
        // Clamping keeps the impossible side finite.
        assert!(log_likelihood(&all_hits, 0.0).is_finite());
        assert!(log_likelihood(&no_hits, FRAC_PI_2).is_finite());
    }

    #[test]
    fn single_circuit_is_sample_proportion() {
        let theta = maximize_likelihood(&[MeasurementRecord::new(0, 1024, 128)]);
        assert!((theta - theta_from_amplitude(0.125)).abs() < 1e-6);
        assert_eq!(
            maximize_likelihood(&[MeasurementRecord::new(0, 16, 0)]),
            0.0
        );
        let top = maximize_likelihood(&[MeasurementRecord::new(0, 16, 16)]);
        assert!((top - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn maximizer_beats_every_grid_point() {
        let records = [
            MeasurementRecord::new(0, 32, 5),
            MeasurementRecord::new(1, 32, 20),
            MeasurementRecord::new(2, 32, 31),
            MeasurementRecord::new(4, 32, 2),
        ];
        let theta = maximize_likelihood(&records);
        let best = log_likelihood(&records, theta);
        for i in (0..GRID_POINTS).step_by(7) {
            assert!(best >= log_likelihood(&records, grid_theta(i)));
        }
    }

    #[test]
    fn empty_oracle_estimates_zero() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let o = OracleSpec::new(6, 0).unwrap();
        for m in [0, 3, 4] {
            let r = run_mlqae(&o, m, 64, ScheduleKind::Eis, Backend::Statevector, &mut rng);
            assert_eq!(r.a_hat, 0.0);
            assert_eq!(r.theta_hat, 0.0);
        }
    }

    #[test]
    #[should_panic(expected = "at least one record")]
    fn empty_records_panic() {
        maximize_likelihood(&[]);
    }

    #[test]
    fn kind_names() {
        assert_eq!("eis".parse(), Ok(ScheduleKind::Eis));
        assert_eq!("lis".parse(), Ok(ScheduleKind::Lis));
        assert!("cis".parse::<ScheduleKind>().is_err());
    }
}
