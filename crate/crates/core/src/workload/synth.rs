use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use super::{Network, SpikeDb, Synapse};
use crate::error::{Error, Result};

/// Independent homogeneous Poisson trains, one per neuron of `net`.
///
/// `rates_hz` holds one rate per neuron. Output is a pure function of the
/// arguments.
pub fn gen_poisson(net: &Network, rates_hz: &[f64], horizon_ms: f64, seed: u64) -> Result<SpikeDb> {
    if rates_hz.len() != net.neuron_count() {
        return Err(Error::TrainCountMismatch {
            expected: net.neuron_count(),
            got: rates_hz.len(),
        });
    }
    if !(horizon_ms.is_finite() && horizon_ms > 0.0) {
        return Err(Error::InvalidHorizon(horizon_ms));
    }
    for (neuron, &rate) in rates_hz.iter().enumerate() {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidRate { neuron, rate });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trains = rates_hz
        .iter()
        .map(|&rate| {
            // Hz to events per ms.
            let gaps = Exp::new(rate / 1000.0).expect("rate checked above");
            let mut train = Vec::new();
            let mut t = 0.0f64;
            loop {
                t += gaps.sample(&mut rng);
                if t > horizon_ms {
                    break;
                }
                if train.last().is_none_or(|&last| t > last) {
                    train.push(t);
                }
            }
            train
        })
        .collect();
    SpikeDb::new(horizon_ms, trains)
}

/// Random directed graph with exactly `synapses` distinct edges, no
/// self-loops, and weights drawn uniformly from `[0.5, 1.5)`.
pub fn random_network(neurons: usize, synapses: usize, seed: u64) -> Result<Network> {
    if neurons == 0 {
        return Err(Error::NoNeurons);
    }
    let max_edges = neurons.saturating_mul(neurons - 1);
    if synapses > max_edges {
        return Err(Error::Inconsistent(alloc::format!(
            "{synapses} synapses requested but {neurons} neurons allow at most {max_edges}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut syns = Vec::with_capacity(synapses);
    while syns.len() < synapses {
        let pre = rng.random_range(0..neurons);
        let post = rng.random_range(0..neurons);
        if pre != post && seen.insert((pre, post)) {
            syns.push(Synapse::new(pre, post, rng.random_range(0.5..1.5)));
        }
    }
    Network::new(neurons, syns)
}

/// Like [`random_network`], but neurons `0..sources` receive no synapses, so
/// they can be driven externally in [`simulate_lif`](super::simulate_lif).
pub fn random_driven_network(neurons: usize, synapses: usize, sources: usize, seed: u64) -> Result<Network> {
    if neurons == 0 {
        return Err(Error::NoNeurons);
    }
    if sources == 0 || sources >= neurons {
        return Err(Error::Inconsistent(alloc::format!(
            "need between 1 and {} source neurons, got {sources}",
            neurons - 1
        )));
    }
    let max_edges = (neurons - sources).saturating_mul(neurons - 1);
    if synapses > max_edges {
        return Err(Error::Inconsistent(alloc::format!(
            "{synapses} synapses requested but at most {max_edges} fit"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut syns = Vec::with_capacity(synapses);
    while syns.len() < synapses {
        let pre = rng.random_range(0..neurons);
        let post = rng.random_range(sources..neurons);
        if pre != post && seen.insert((pre, post)) {
            syns.push(Synapse::new(pre, post, rng.random_range(0.5..1.5)));
        }
    }
    Network::new(neurons, syns)
}

/// Per-neuron firing-rate assignment for synthetic workloads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateProfile {
    /// Every neuron fires at the same rate.
    Uniform { hz: f64 },
    /// Zipf-like skew: the neuron at rank `r` (ranks shuffled by the seed)
    /// fires at `max_hz / (r + 1)^exponent`.
    Skewed { max_hz: f64, exponent: f64 },
}

impl RateProfile {
    pub fn rates(&self, neurons: usize, seed: u64) -> Vec<f64> {
        match *self {
            RateProfile::Uniform { hz } => alloc::vec![hz; neurons],
            RateProfile::Skewed { max_hz, exponent } => {
                let mut ranks: Vec<usize> = (0..neurons).collect();
                ranks.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                ranks
                    .iter()
                    .map(|&r| max_hz / libm::pow((r + 1) as f64, exponent))
                    .collect()
            }
        }
    }
}
