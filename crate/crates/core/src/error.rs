use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::hardware::SpecViolation;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("network must have at least one neuron")]
    NoNeurons,
    #[error("synapse {synapse}: neuron {neuron} out of range (neuron_count = {count})")]
    NeuronOutOfRange {
        synapse: usize,
        neuron: usize,
        count: usize,
    },
    #[error("synapse {synapse}: self-loop on neuron {neuron}")]
    SelfLoop { synapse: usize, neuron: usize },
    #[error("synapse {synapse}: duplicate connection {pre} -> {post}")]
    DuplicateSynapse {
        synapse: usize,
        pre: usize,
        post: usize,
    },
    #[error("synapse {synapse}: weight is not finite")]
    NonFiniteWeight { synapse: usize },
    #[error("horizon must be positive and finite, got {0}")]
    InvalidHorizon(f64),
    #[error("expected {expected} spike trains, got {got}")]
    TrainCountMismatch { expected: usize, got: usize },
    #[error("neuron {neuron}: time {time} exceeds horizon {horizon}")]
    TimeExceedsHorizon {
        neuron: usize,
        time: f64,
        horizon: f64,
    },
    #[error("neuron {neuron}: negative or non-finite time {time}")]
    InvalidTime { neuron: usize, time: f64 },
    #[error("neuron {neuron}: train not strictly increasing at index {index} ({prev} then {time})")]
    UnsortedTrain {
        neuron: usize,
        index: usize,
        prev: f64,
        time: f64,
    },
    #[error("neuron {neuron}: rate must be positive and finite, got {rate}")]
    InvalidRate { neuron: usize, rate: f64 },
    #[error("invalid LIF parameters: {0}")]
    InvalidLifParams(&'static str),
    #[error("neuron {neuron} is driven externally but has incoming synapses")]
    DrivenNeuronHasInputs { neuron: usize },
    #[error("invalid hardware: {}", Violations(.0))]
    InvalidSpec(Vec<SpecViolation>),
    #[error("invalid NBTI parameters: {0}")]
    InvalidNbti(&'static str),
    #[error("invalid discharge policy: {0}")]
    InvalidPolicy(String),
    #[error("partition has {got} entries for {expected} neurons")]
    PartitionLength { expected: usize, got: usize },
    #[error("neuron {neuron} assigned to crossbar {crossbar}, but only {crossbars} exist")]
    CrossbarOutOfRange {
        neuron: usize,
        crossbar: usize,
        crossbars: usize,
    },
    #[error("crossbar {crossbar} over capacity: {rows_used}/{rows} rows, {cols_used}/{cols} columns")]
    CapacityExceeded {
        crossbar: usize,
        rows_used: usize,
        rows: usize,
        cols_used: usize,
        cols: usize,
    },
    #[error("no crossbar can host neuron {neuron} within capacity")]
    Infeasible { neuron: usize },
    #[error("ISI undefined for a train of {spikes} spike(s)")]
    UndefinedIsi { spikes: usize },
    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),
}

struct Violations<'a>(&'a [SpecViolation]);

impl fmt::Display for Violations<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
