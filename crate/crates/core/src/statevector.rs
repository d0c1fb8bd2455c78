//! Dense statevector for `n` domain qubits plus one flag qubit.
//!
//! Basis index layout: bit 0 is the flag qubit, bits `1..=n` hold the domain
//! index `d`, so amplitude `(d, flag)` lives at `(d << 1) | flag`.
//!
//! All operators act matrix-free in place:
//!
//! * `A = M (H^n x I)`: Hadamards on the domain register, then `M` flips the
//!   flag for every good `d`.
//! * `S_chi = I^n x Z`: negates flag-1 amplitudes.
//! * `S_0 = I - 2|0><0|`: negates the all-zeros amplitude.
//! * `Q = A S_0 A^-1 S_chi`, applied right to left.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math;
use crate::oracle::OracleSpec;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    qubits: u32,
    amplitudes: Vec<Complex64>,
}

#[inline]
pub fn basis_index(domain: u64, flag: bool) -> usize {
    ((domain << 1) | flag as u64) as usize
}

impl Statevector {
    /// `|0>_n |0>`.
    pub fn zero(qubits: u32) -> Self {
        Self::basis(qubits, 0)
    }

    /// Computational basis state with the given raw index.
    ///
    /// # Panics
    /// If `index >= 2^(qubits+1)`.
    pub fn basis(qubits: u32, index: usize) -> Self {
        let len = 1usize << (qubits + 1);
        assert!(
            index < len,
            "basis index {index} out of range for {len} amplitudes"
        );
        let mut amplitudes = vec![ZERO; len];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Statevector { qubits, amplitudes }
    }

    /// Wraps raw amplitudes. Returns `None` unless the length is `2^(qubits+1)`.
    /// Normalization is the caller's responsibility.
    pub fn from_amplitudes(qubits: u32, amplitudes: Vec<Complex64>) -> Option<Self> {
        (amplitudes.len() == 1usize << (qubits + 1)).then_some(Statevector { qubits, amplitudes })
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn amplitude(&self, domain: u64, flag: bool) -> Complex64 {
        self.amplitudes[basis_index(domain, flag)]
    }

    /// `sum |amplitude|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of reading 1 on the flag qubit.
    pub fn flag_probability(&self) -> f64 {
        self.amplitudes
            .iter()
            .skip(1)
            .step_by(2)
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// `S_chi`: phase flip on every flag-1 amplitude.
    pub fn apply_s_chi(&mut self) {
        for a in self.amplitudes.iter_mut().skip(1).step_by(2) {
            *a = -*a;
        }
    }

    /// `S_0`: phase flip on the all-zeros amplitude.
    pub fn apply_s_0(&mut self) {
        self.amplitudes[0] = -self.amplitudes[0];
    }

    /// Walsh-Hadamard transform over the domain bits, flag untouched.
    fn hadamard_domain(&mut self) {
        let len = self.amplitudes.len();
        let mut half = 2;
        while half < len {
            for block in (0..len).step_by(2 * half) {
                for i in block..block + half {
                    let x = self.amplitudes[i];
                    let y = self.amplitudes[i + half];
                    self.amplitudes[i] = x + y;
                    self.amplitudes[i + half] = x - y;
                }
            }
            half <<= 1;
        }
        let scale = 1.0 / math::sqrt((len >> 1) as f64);
        for a in &mut self.amplitudes {
            *a *= scale;
        }
    }

    /// Flag-bit flip controlled on the domain index being good. Self-inverse.
    fn mark(&mut self, oracle: &OracleSpec) {
        for d in 0..(self.amplitudes.len() >> 1) as u64 {
            if oracle.is_good(d) {
                self.amplitudes
                    .swap(basis_index(d, false), basis_index(d, true));
            }
        }
    }

    fn check_oracle(&self, oracle: &OracleSpec) {
        assert_eq!(
            self.qubits,
            oracle.qubits(),
            "statevector and oracle disagree on the domain register width"
        );
    }

    /// `A`.
    pub fn apply_a(&mut self, oracle: &OracleSpec) {
        self.check_oracle(oracle);
        self.hadamard_domain();
        self.mark(oracle);
    }

    /// `A^-1 = (H^n x I) M`.
    pub fn apply_a_inverse(&mut self, oracle: &OracleSpec) {
        self.check_oracle(oracle);
        self.mark(oracle);
        self.hadamard_domain();
    }

    /// One Grover iterate `Q = A S_0 A^-1 S_chi`.
    pub fn apply_q(&mut self, oracle: &OracleSpec) {
        self.apply_s_chi();
        self.apply_a_inverse(oracle);
        self.apply_s_0();
        self.apply_a(oracle);
    }

    /// `Q^m` by repeated application; `m = 0` leaves the state alone.
    pub fn apply_q_power(&mut self, oracle: &OracleSpec, m: u64) {
        for _ in 0..m {
            self.apply_q(oracle);
        }
    }
}

/// `A|0>_{n+1}`: amplitude `1/sqrt(2^n)` on `(d, [d is good])`.
pub fn prepare_a(oracle: &OracleSpec) -> Statevector {
    let mut state = Statevector::zero(oracle.qubits());
    state.apply_a(oracle);
    state
}

/// Exact flag-1 probability of `Q^m A|0>`, by simulation.
pub fn simulated_flag_probability(oracle: &OracleSpec, m: u64) -> f64 {
    let mut state = prepare_a(oracle);
    state.apply_q_power(oracle, m);
    state.flag_probability()
}
