//! SNN workloads: the network, its recorded per-neuron spike trains, and the
//! per-synapse view of those trains.
//!
//! Spikes are recorded per pre-neuron. A neuron's spike excites every
//! outgoing synapse at the same instant, so [`expand_to_synapses`] recovers
//! the per-synapse arrangement without storing it.

mod lif;
mod synth;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use lif::{simulate_lif, LifParams};
pub use synth::{gen_poisson, random_driven_network, random_network, RateProfile};

/// A directed, weighted connection. Its id is its index in [`Network::synapses`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Synapse {
    pub pre: usize,
    pub post: usize,
    pub weight: f64,
}

impl Synapse {
    pub fn new(pre: usize, post: usize, weight: f64) -> Self {
        Self { pre, post, weight }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    neuron_count: usize,
    synapses: Vec<Synapse>,
}

impl Network {
    /// Builds a network, rejecting self-loops, out-of-range endpoints and
    /// duplicate `(pre, post)` pairs.
    pub fn new(neuron_count: usize, synapses: Vec<Synapse>) -> Result<Self> {
        if neuron_count == 0 {
            return Err(Error::NoNeurons);
        }
        let mut seen = BTreeSet::new();
        for (id, syn) in synapses.iter().enumerate() {
            for neuron in [syn.pre, syn.post] {
                if neuron >= neuron_count {
                    return Err(Error::NeuronOutOfRange {
                        synapse: id,
                        neuron,
                        count: neuron_count,
                    });
                }
            }
            if syn.pre == syn.post {
                return Err(Error::SelfLoop {
                    synapse: id,
                    neuron: syn.pre,
                });
            }
            if !syn.weight.is_finite() {
                return Err(Error::NonFiniteWeight { synapse: id });
            }
            if !seen.insert((syn.pre, syn.post)) {
                return Err(Error::DuplicateSynapse {
                    synapse: id,
                    pre: syn.pre,
                    post: syn.post,
                });
            }
        }
        Ok(Self {
            neuron_count,
            synapses,
        })
    }

    pub fn neuron_count(&self) -> usize {
        self.neuron_count
    }

    pub fn synapse_count(&self) -> usize {
        self.synapses.len()
    }

    pub fn synapses(&self) -> &[Synapse] {
        &self.synapses
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.neuron_count];
        for syn in &self.synapses {
            deg[syn.pre] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.neuron_count];
        for syn in &self.synapses {
            deg[syn.post] += 1;
        }
        deg
    }

    /// Outgoing synapse ids per neuron, in id order.
    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.neuron_count];
        for (id, syn) in self.synapses.iter().enumerate() {
            out[syn.pre].push(id);
        }
        out
    }

    /// Incoming synapse ids per neuron, in id order.
    pub fn incoming(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.neuron_count];
        for (id, syn) in self.synapses.iter().enumerate() {
            inc[syn.post].push(id);
        }
        inc
    }
}

/// Per-neuron firing times (ms) over `[0, horizon_ms]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeDb {
    horizon_ms: f64,
    trains: Vec<Vec<f64>>,
}

impl SpikeDb {
    pub fn new(horizon_ms: f64, trains: Vec<Vec<f64>>) -> Result<Self> {
        if !(horizon_ms.is_finite() && horizon_ms > 0.0) {
            return Err(Error::InvalidHorizon(horizon_ms));
        }
        for (neuron, train) in trains.iter().enumerate() {
            check_train(neuron, train, horizon_ms)?;
        }
        Ok(Self { horizon_ms, trains })
    }

    /// A database with `neurons` empty trains.
    pub fn empty(horizon_ms: f64, neurons: usize) -> Result<Self> {
        Self::new(horizon_ms, vec![Vec::new(); neurons])
    }

    pub fn horizon_ms(&self) -> f64 {
        self.horizon_ms
    }

    pub fn trains(&self) -> &[Vec<f64>] {
        &self.trains
    }

    pub fn train(&self, neuron: usize) -> &[f64] {
        &self.trains[neuron]
    }

    pub fn neuron_count(&self) -> usize {
        self.trains.len()
    }

    pub fn total_spikes(&self) -> usize {
        self.trains.iter().map(Vec::len).sum()
    }

    pub fn into_trains(self) -> Vec<Vec<f64>> {
        self.trains
    }

    /// Checks that this database has exactly one train per neuron of `net`.
    pub fn check_against(&self, net: &Network) -> Result<()> {
        if self.trains.len() != net.neuron_count() {
            return Err(Error::TrainCountMismatch {
                expected: net.neuron_count(),
                got: self.trains.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn check_train(neuron: usize, train: &[f64], horizon_ms: f64) -> Result<()> {
    let mut prev: Option<f64> = None;
    for (index, &time) in train.iter().enumerate() {
        if !(time.is_finite() && time >= 0.0) {
            return Err(Error::InvalidTime { neuron, time });
        }
        if time > horizon_ms {
            return Err(Error::TimeExceedsHorizon {
                neuron,
                time,
                horizon: horizon_ms,
            });
        }
        if let Some(p) = prev {
            if time <= p {
                return Err(Error::UnsortedTrain {
                    neuron,
                    index,
                    prev: p,
                    time,
                });
            }
        }
        prev = Some(time);
    }
    Ok(())
}

/// Spike trains indexed by synapse id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SynapseTrains {
    trains: Vec<Vec<f64>>,
}

impl SynapseTrains {
    pub fn trains(&self) -> &[Vec<f64>] {
        &self.trains
    }

    pub fn train(&self, synapse: usize) -> &[f64] {
        &self.trains[synapse]
    }

    pub fn len(&self) -> usize {
        self.trains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trains.is_empty()
    }

    /// Σ_s k_s.
    pub fn total_spikes(&self) -> usize {
        self.trains.iter().map(Vec::len).sum()
    }
}

/// Arranges spikes by the synapses they excite: synapse `s` carries the train
/// of its pre-neuron.
///
/// Panics if `db` does not hold one train per neuron of `net`.
pub fn expand_to_synapses(net: &Network, db: &SpikeDb) -> SynapseTrains {
    assert_eq!(
        db.neuron_count(),
        net.neuron_count(),
        "spike database does not match network"
    );
    let trains = net
        .synapses()
        .iter()
        .map(|syn| db.train(syn.pre).to_vec())
        .collect();
    SynapseTrains { trains }
}

/// Per-synapse spike counts `k_s` without materializing the trains.
pub fn synapse_spike_counts(net: &Network, db: &SpikeDb) -> Vec<u64> {
    net.synapses()
        .iter()
        .map(|syn| db.train(syn.pre).len() as u64)
        .collect()
}
