#![allow(dead_code)]

use proptest::prelude::*;
use pumpwear_core::hardware::HardwareSpec;
use pumpwear_core::workload::{Network, SpikeDb, Synapse};

/// Random network with `2..=max_n` neurons and up to `max_s` synapses.
pub fn network(max_n: usize, max_s: usize) -> impl Strategy<Value = Network> {
    (2..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
        let max = pairs.len().min(max_s);
        (Just(n), proptest::sample::subsequence(pairs, 0..=max), proptest::collection::vec(0.5f64..1.5, max))
            .prop_map(|(n, edges, w)| {
                let syns = edges.iter().zip(&w).map(|(&(a, b), &w)| Synapse::new(a, b, w)).collect();
                Network::new(n, syns).unwrap()
            })
    })
}

/// Strictly increasing train inside `[0, horizon)`.
pub fn train(horizon: f64, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0..horizon, 0..=max_len).prop_map(|mut t| {
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    })
}

pub fn nonempty_train(horizon: f64, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    train(horizon, max_len).prop_filter("nonempty", |t| !t.is_empty())
}

/// A network together with a matching spike database.
pub fn workload(max_n: usize, max_s: usize, horizon: f64, max_spikes: usize) -> impl Strategy<Value = (Network, SpikeDb)> {
    network(max_n, max_s).prop_flat_map(move |net| {
        let n = net.neuron_count();
        (Just(net), proptest::collection::vec(train(horizon, max_spikes), n))
            .prop_map(move |(net, trains)| (net, SpikeDb::new(horizon, trains).unwrap()))
    })
}

pub fn spec(c: usize, rows: usize, cols: usize, placement: Vec<usize>) -> HardwareSpec {
    let pumps = placement.iter().max().map_or(1, |m| m + 1);
    HardwareSpec {
        crossbar_count: c,
        crossbar_rows: rows,
        crossbar_cols: cols,
        pump_count: pumps,
        placement,
        ..HardwareSpec::default()
    }
}

/// Capacity check from the definitions: rows are distinct pre-neurons
/// feeding a crossbar, columns are its neurons with at least one input.
pub fn feasible(assign: &[usize], net: &Network, spec: &HardwareSpec) -> bool {
    let n = net.neuron_count();
    let mut rows = vec![vec![false; n]; spec.crossbar_count];
    let mut has_input = vec![false; n];
    for s in net.synapses() {
        rows[assign[s.post]][s.pre] = true;
        has_input[s.post] = true;
    }
    let mut cols = vec![0usize; spec.crossbar_count];
    for (v, &c) in assign.iter().enumerate() {
        cols[c] += usize::from(has_input[v]);
    }
    (0..spec.crossbar_count)
        .all(|c| rows[c].iter().filter(|&&x| x).count() <= spec.crossbar_rows && cols[c] <= spec.crossbar_cols)
}

pub fn cut_of(assign: &[usize], net: &Network, db: &SpikeDb) -> u64 {
    net.synapses()
        .iter()
        .filter(|s| assign[s.pre] != assign[s.post])
        .map(|s| db.train(s.pre).len() as u64)
        .sum()
}

/// Calls `f` on every assignment of `n` neurons to `c` crossbars.
pub fn for_each_partition(n: usize, c: usize, mut f: impl FnMut(&[usize])) {
    let mut a = vec![0usize; n];
    loop {
        f(&a);
        let mut i = 0;
        while i < n {
            a[i] += 1;
            if a[i] < c {
                break;
            }
            a[i] = 0;
            i += 1;
        }
        if i == n {
            return;
        }
    }
}
