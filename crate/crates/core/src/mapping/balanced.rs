use alloc::vec;
use alloc::vec::Vec;

use super::{NeuronPartition, Usage};
use crate::error::{Error, Result};
use crate::hardware::HardwareSpec;
use crate::workload::{Network, SpikeDb};

/// Synapse activations a neuron brings to its crossbar: the spikes arriving
/// over its incoming synapses.
pub fn activation_weights(net: &Network, db: &SpikeDb) -> Vec<u64> {
    let mut w = vec![0u64; net.neuron_count()];
    for syn in net.synapses() {
        w[syn.post] += db.train(syn.pre).len() as u64;
    }
    w
}

/// Utilization-balanced mapping by longest-processing-time list scheduling:
/// neurons in decreasing activation weight go to the least-loaded crossbar
/// that still has room. Ties go to the lowest index.
pub fn map_balanced(net: &Network, db: &SpikeDb, spec: &HardwareSpec) -> Result<NeuronPartition> {
    spec.validate()?;
    db.check_against(net)?;
    let weights = activation_weights(net, db);
    let mut order: Vec<usize> = (0..net.neuron_count()).collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));

    let mut usage = Usage::new(net, spec);
    let mut load = vec![0u64; spec.crossbar_count];
    let mut assign = vec![0; net.neuron_count()];
    for neuron in order {
        let target = (0..spec.crossbar_count)
            .filter(|&j| usage.fits(j, neuron))
            .min_by_key(|&j| (load[j], j))
            .ok_or(Error::Infeasible { neuron })?;
        usage.add(target, neuron);
        load[target] += weights[neuron];
        assign[neuron] = target;
    }
    Ok(NeuronPartition(assign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::{derive_mapping, utilization};
    use crate::workload::Synapse;

    /// Star-shaped nets where neuron `i + 1` receives `w[i]` spikes from a
    /// dedicated source neuron, so activation weights are exactly `w`.
    fn weighted(w: &[usize]) -> (Network, SpikeDb, Vec<usize>) {
        let n = 2 * w.len();
        let mut syns = Vec::new();
        let mut trains = vec![Vec::new(); n];
        let mut sinks = Vec::new();
        for (i, &k) in w.iter().enumerate() {
            let (src, dst) = (2 * i, 2 * i + 1);
            syns.push(Synapse::new(src, dst, 1.0));
            trains[src] = (0..k).map(|t| t as f64).collect();
            sinks.push(dst);
        }
        let net = Network::new(n, syns).unwrap();
        (net, SpikeDb::new(100.0, trains).unwrap(), sinks)
    }

    fn spec(c: usize) -> HardwareSpec {
        HardwareSpec {
            crossbar_count: c,
            pump_count: 1,
            placement: vec![0; c],
            ..HardwareSpec::default()
        }
    }

    fn loads(w: &[usize], c: usize) -> Vec<u64> {
        let (net, db, _) = weighted(w);
        let p = map_balanced(&net, &db, &spec(c)).unwrap();
        let m = derive_mapping(&p, &net, &spec(c)).unwrap();
        utilization(&m, &db, &net, &spec(c))
    }

    #[test]
    fn symmetric_split() {
        assert_eq!(loads(&[10, 10, 10, 10], 2), vec![20, 20]);
    }

    #[test]
    fn hand_run_lpt() {
        // 9 -> x0; 5 -> x1; 3 -> x1 (5 < 9); 3 -> x1 (8 < 9).
        assert_eq!(loads(&[9, 5, 3, 3], 2), vec![9, 11]);
    }

    #[test]
    fn respects_capacity() {
        let (net, db, _) = weighted(&[9, 5, 3, 3]);
        let tight = HardwareSpec {
            crossbar_cols: 2,
            ..spec(2)
        };
        let p = map_balanced(&net, &db, &tight).unwrap();
        p.check(&net, &tight).unwrap();
        let one_col = HardwareSpec {
            crossbar_cols: 1,
            ..spec(2)
        };
        assert!(matches!(
            map_balanced(&net, &db, &one_col),
            Err(Error::Infeasible { .. })
        ));
    }
}
