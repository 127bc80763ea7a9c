//! Synapse-to-crossbar mapping.
//!
//! The decision variable is a neuron partition. A crossbar's rows carry the
//! distinct pre-neurons of the synapses stored on it and its columns carry
//! their post-neurons, so each synapse lives on its post-neuron's crossbar.
//! A synapse whose pre-neuron sits on another crossbar is cut: its spikes
//! cross the shared interconnect.

mod balanced;
mod min_comm;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hardware::HardwareSpec;
use crate::workload::{synapse_spike_counts, Network, SpikeDb};

pub use balanced::{activation_weights, map_balanced};
pub use min_comm::{map_min_comm, refine_min_comm};

/// Crossbar index per neuron.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NeuronPartition(Vec<usize>);

impl NeuronPartition {
    pub fn new(assignment: Vec<usize>) -> Self {
        Self(assignment)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn crossbar_of(&self, neuron: usize) -> usize {
        self.0[neuron]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Verifies length, crossbar range and per-crossbar row/column capacity.
    pub fn check(&self, net: &Network, spec: &HardwareSpec) -> Result<()> {
        if self.0.len() != net.neuron_count() {
            return Err(Error::PartitionLength {
                expected: net.neuron_count(),
                got: self.0.len(),
            });
        }
        for (neuron, &crossbar) in self.0.iter().enumerate() {
            if crossbar >= spec.crossbar_count {
                return Err(Error::CrossbarOutOfRange {
                    neuron,
                    crossbar,
                    crossbars: spec.crossbar_count,
                });
            }
        }
        let mut usage = Usage::new(net, spec);
        for neuron in 0..self.0.len() {
            usage.add(self.0[neuron], neuron);
        }
        for crossbar in 0..spec.crossbar_count {
            let (rows_used, cols_used) = (usage.rows_used[crossbar], usage.cols_used[crossbar]);
            if rows_used > spec.crossbar_rows || cols_used > spec.crossbar_cols {
                return Err(Error::CapacityExceeded {
                    crossbar,
                    rows_used,
                    rows: spec.crossbar_rows,
                    cols_used,
                    cols: spec.crossbar_cols,
                });
            }
        }
        Ok(())
    }
}

/// Crossbar index per synapse: the dense form of the one-hot matrix M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingMatrix(Vec<usize>);

impl MappingMatrix {
    pub fn crossbars(&self) -> &[usize] {
        &self.0
    }

    pub fn crossbar_of(&self, synapse: usize) -> usize {
        self.0[synapse]
    }

    /// Expands to the S x C 0/1 matrix.
    pub fn to_dense(&self, crossbar_count: usize) -> Vec<Vec<u8>> {
        self.0
            .iter()
            .map(|&j| {
                let mut row = vec![0u8; crossbar_count];
                row[j] = 1;
                row
            })
            .collect()
    }
}

/// `m_ij = 1` iff `j` is the crossbar of synapse `i`'s post-neuron.
pub fn derive_mapping(partition: &NeuronPartition, net: &Network, spec: &HardwareSpec) -> Result<MappingMatrix> {
    partition.check(net, spec)?;
    Ok(MappingMatrix(
        net.synapses()
            .iter()
            .map(|syn| partition.crossbar_of(syn.post))
            .collect(),
    ))
}

/// Spikes carried by synapses whose endpoints sit on different crossbars.
pub fn cut_spike_count(partition: &NeuronPartition, net: &Network, db: &SpikeDb) -> u64 {
    net.synapses()
        .iter()
        .filter(|syn| partition.crossbar_of(syn.pre) != partition.crossbar_of(syn.post))
        .map(|syn| db.train(syn.pre).len() as u64)
        .sum()
}

/// Synapse-spike events served by each crossbar.
pub fn utilization(mapping: &MappingMatrix, db: &SpikeDb, net: &Network, spec: &HardwareSpec) -> Vec<u64> {
    let mut load = vec![0u64; spec.crossbar_count];
    for (s, k) in synapse_spike_counts(net, db).into_iter().enumerate() {
        load[mapping.crossbar_of(s)] += k;
    }
    load
}

/// Baseline: neuron `n` goes to crossbar `n mod C`, or to the lowest-index
/// crossbar with room when that one is full.
pub fn map_round_robin(net: &Network, spec: &HardwareSpec) -> Result<NeuronPartition> {
    spec.validate()?;
    let c = spec.crossbar_count;
    let mut usage = Usage::new(net, spec);
    let mut assign = vec![0; net.neuron_count()];
    for (neuron, slot) in assign.iter_mut().enumerate() {
        let preferred = neuron % c;
        let target = core::iter::once(preferred)
            .chain(0..c)
            .find(|&j| usage.fits(j, neuron))
            .ok_or(Error::Infeasible { neuron })?;
        usage.add(target, neuron);
        *slot = target;
    }
    Ok(NeuronPartition(assign))
}

/// Incremental row/column occupancy per crossbar.
#[derive(Clone)]
pub(crate) struct Usage {
    neurons: usize,
    rows: usize,
    cols: usize,
    /// Distinct pre-neurons of each neuron's incoming synapses.
    preds: Vec<Vec<usize>>,
    /// `row_refs[j * neurons + p]`: synapses on crossbar `j` driven by `p`.
    row_refs: Vec<u32>,
    rows_used: Vec<usize>,
    cols_used: Vec<usize>,
}

impl Usage {
    pub(crate) fn new(net: &Network, spec: &HardwareSpec) -> Self {
        let neurons = net.neuron_count();
        let mut preds = vec![Vec::new(); neurons];
        for syn in net.synapses() {
            preds[syn.post].push(syn.pre);
        }
        Self {
            neurons,
            rows: spec.crossbar_rows,
            cols: spec.crossbar_cols,
            preds,
            row_refs: vec![0; spec.crossbar_count * neurons],
            rows_used: vec![0; spec.crossbar_count],
            cols_used: vec![0; spec.crossbar_count],
        }
    }

    pub(crate) fn fits(&self, crossbar: usize, neuron: usize) -> bool {
        let preds = &self.preds[neuron];
        if preds.is_empty() {
            return true;
        }
        if self.cols_used[crossbar] + 1 > self.cols {
            return false;
        }
        let base = crossbar * self.neurons;
        let new_rows = preds.iter().filter(|&&p| self.row_refs[base + p] == 0).count();
        self.rows_used[crossbar] + new_rows <= self.rows
    }

    pub(crate) fn add(&mut self, crossbar: usize, neuron: usize) {
        let base = crossbar * self.neurons;
        for &p in &self.preds[neuron] {
            if self.row_refs[base + p] == 0 {
                self.rows_used[crossbar] += 1;
            }
            self.row_refs[base + p] += 1;
        }
        if !self.preds[neuron].is_empty() {
            self.cols_used[crossbar] += 1;
        }
    }

    pub(crate) fn remove(&mut self, crossbar: usize, neuron: usize) {
        let base = crossbar * self.neurons;
        for &p in &self.preds[neuron] {
            self.row_refs[base + p] -= 1;
            if self.row_refs[base + p] == 0 {
                self.rows_used[crossbar] -= 1;
            }
        }
        if !self.preds[neuron].is_empty() {
            self.cols_used[crossbar] -= 1;
        }
    }
}
