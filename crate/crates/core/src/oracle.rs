//! Problem definition for amplitude estimation: a uniform superposition over
//! `2^n` domain states, a subset of which is marked "good".

use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Largest domain register the crate accepts. The statevector holds
/// `2^(n+1)` amplitudes, so this is already far past what fits in memory;
/// the bound only keeps index arithmetic inside `usize`.
pub const MAX_DOMAIN_QUBITS: u32 = 40;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// `n` was zero or above [`MAX_DOMAIN_QUBITS`].
    QubitCount(u32),
    /// More good states requested than the domain holds.
    GoodCountTooLarge {
        good_count: u64,
        domain_size: u64,
    },
    /// An explicit good index fell outside `0..2^n`.
    IndexOutOfRange {
        index: u64,
        domain_size: u64,
    },
    DuplicateIndex(u64),
    /// `a * 2^n` is not an integer, so no good-state count realizes `a`.
    NotRealizable {
        amplitude: f64,
        qubits: u32,
    },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::QubitCount(n) => write!(
                f,
                "domain qubit count must be in 1..={MAX_DOMAIN_QUBITS}, got {n}"
            ),
            OracleError::GoodCountTooLarge {
                good_count,
                domain_size,
            } => write!(
                f,
                "good-state count {good_count} exceeds domain size {domain_size}"
            ),
            OracleError::IndexOutOfRange { index, domain_size } => write!(
                f,
                "good index {index} is outside the domain 0..{domain_size}"
            ),
            OracleError::DuplicateIndex(i) => write!(f, "good index {i} listed twice"),
            OracleError::NotRealizable { amplitude, qubits } => write!(
                f,
                "amplitude {amplitude} times 2^{qubits} is not an integer good-state count"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

/// Which domain indices are good.
#[derive(Debug, Clone, PartialEq, Eq)]
enum GoodSet {
    /// `{0, 1, ..., K-1}`.
    Prefix(u64),
    /// Sorted, deduplicated membership table.
    Explicit { members: Vec<u64>, mask: Vec<bool> },
}

/// A state-preparation oracle on `n` domain qubits plus one flag qubit.
///
/// The oracle prepares `sqrt(1-a)|bad>|0> + sqrt(a)|good>|1>` with
/// `a = K / 2^n`, and `theta = arcsin(sqrt(a))`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    qubits: u32,
    good: GoodSet,
}

fn check_qubits(qubits: u32) -> Result<u64, OracleError> {
    if qubits == 0 || qubits > MAX_DOMAIN_QUBITS {
        return Err(OracleError::QubitCount(qubits));
    }
    Ok(1u64 << qubits)
}

impl OracleSpec {
    /// Oracle whose good states are the first `good_count` domain indices.
    pub fn new(qubits: u32, good_count: u64) -> Result<Self, OracleError> {
        let domain_size = check_qubits(qubits)?;
        if good_count > domain_size {
            return Err(OracleError::GoodCountTooLarge {
                good_count,
                domain_size,
            });
        }
        Ok(OracleSpec {
            qubits,
            good: GoodSet::Prefix(good_count),
        })
    }

    /// Oracle marking an explicit set of domain indices.
    pub fn with_good_set(
        qubits: u32,
        good: impl IntoIterator<Item = u64>,
    ) -> Result<Self, OracleError> {
        let domain_size = check_qubits(qubits)?;
        let mut mask = alloc::vec![false; domain_size as usize];
        let mut members = Vec::new();
        for index in good {
            if index >= domain_size {
                return Err(OracleError::IndexOutOfRange { index, domain_size });
            }
            if mask[index as usize] {
                return Err(OracleError::DuplicateIndex(index));
            }
            mask[index as usize] = true;
            members.push(index);
        }
        members.sort_unstable();
        Ok(OracleSpec {
            qubits,
            good: GoodSet::Explicit { members, mask },
        })
    }

    /// Oracle realizing amplitude `a` on `n` qubits with `K = round(a * 2^n)`.
    /// Fails unless `a * 2^n` is integral within `1e-9`.
    pub fn from_amplitude(qubits: u32, amplitude: f64) -> Result<Self, OracleError> {
        let domain_size = check_qubits(qubits)?;
        let scaled = amplitude * domain_size as f64;
        let not_realizable = OracleError::NotRealizable { amplitude, qubits };
        if !(0.0..=1.0).contains(&amplitude) {
            return Err(not_realizable);
        }
        let count = math::round(scaled);
        if (scaled - count).abs() > 1e-9 {
            return Err(not_realizable);
        }
        OracleSpec::new(qubits, count as u64)
    }

    /// Number of domain qubits `n`.
    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    /// `N = 2^n`.
    pub fn domain_size(&self) -> u64 {
        1u64 << self.qubits
    }

    /// Number of good states `K`.
    pub fn good_count(&self) -> u64 {
        match &self.good {
            GoodSet::Prefix(k) => *k,
            GoodSet::Explicit { members, .. } => members.len() as u64,
        }
    }

    #[inline]
    pub fn is_good(&self, index: u64) -> bool {
        match &self.good {
            GoodSet::Prefix(k) => index < *k,
            GoodSet::Explicit { mask, .. } => mask.get(index as usize).copied().unwrap_or(false),
        }
    }

    /// Good indices in ascending order.
    pub fn good_indices(&self) -> Vec<u64> {
        match &self.good {
            GoodSet::Prefix(k) => (0..*k).collect(),
            GoodSet::Explicit { members, .. } => members.clone(),
        }
    }

    /// `a = K / N`.
    pub fn amplitude(&self) -> f64 {
        self.good_count() as f64 / self.domain_size() as f64
    }

    /// `theta = arcsin(sqrt(a))`, in `[0, pi/2]`.
    pub fn theta(&self) -> f64 {
        theta_from_amplitude(self.amplitude())
    }
}

/// `arcsin(sqrt(a))` with `a` clamped into `[0, 1]` first.
pub fn theta_from_amplitude(a: f64) -> f64 {
    math::asin(math::sqrt(a.clamp(0.0, 1.0)))
}

/// `sin^2(theta)`.
pub fn amplitude_from_theta(theta: f64) -> f64 {
    math::sin_sq(theta)
}
