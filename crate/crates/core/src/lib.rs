//! Charge-pump aging and spike-timing evaluation for SNN workloads mapped onto
//! crossbar hardware.
//!
//! The crate is `no_std` with `alloc`. File formats, the CLI and the sweep
//! runner live in the `pumpwear` companion crate.
//!
//! Pipeline, module by module:
//!
//! - [`workload`]: networks, per-neuron spike trains, synthetic generators and
//!   the per-synapse expansion.
//! - [`hardware`]: crossbar/pump platform description, NBTI constants and
//!   discharge policies.
//! - [`mapping`]: neuron partitions, the synapse-to-crossbar matrix and the
//!   round-robin, balanced and min-comm strategies.
//! - [`engine`]: event replay with recovery and interconnect delays, pump
//!   voltage schedules and ISI statistics.
//! - [`reliability`]: generated-defect aging, per-pump aggregation, R(T) and
//!   the MTTF proxy.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod engine;
pub mod error;
pub mod hardware;
pub mod mapping;
pub mod reliability;
pub mod workload;

pub use error::{Error, Result};
