//! Amplitude estimation without phase estimation.
//!
//! The crate simulates the amplitude-amplification operator
//! `Q = A S_0 A^-1 S_chi` on a dense statevector and builds two estimators of
//! the good-state amplitude `a` on top of flag-qubit sampling:
//!
//! * [`mlqae`]: maximum likelihood over a fixed schedule of `Q` powers;
//! * [`iqae`]: adaptive powers with confidence-interval shrinking.
//!
//! [`mci`] holds the classical hit-or-miss baseline.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature; enable `libm` in that case for the floating-point functions.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod backend;
pub mod binomial;
pub mod iqae;
pub mod math;
pub mod mci;
pub mod mlqae;
pub mod optimize;
pub mod oracle;
pub mod rng;
pub mod statevector;

pub use backend::{analytic_flag_probability, measure_flag, Backend};
pub use iqae::{run_iqae, ConfidenceInterval, IqaeConfig, IqaeError, IqaeReport, RoundRecord};
pub use mci::{mci_estimate, run_mci, MciConfig};
pub use mlqae::{
    eis_schedule, log_likelihood, maximize_likelihood, oracle_call_count, run_mlqae,
    MeasurementRecord, MlqaeReport, Schedule, ScheduleKind,
};
pub use oracle::{OracleError, OracleSpec};
pub use statevector::{prepare_a, Statevector};
