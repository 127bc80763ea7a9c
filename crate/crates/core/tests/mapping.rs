mod common;

use common::{cut_of, feasible, for_each_partition, spec};
use proptest::prelude::*;
use pumpwear_core::hardware::synapse_to_pump;
use pumpwear_core::mapping::{
    activation_weights, cut_spike_count, derive_mapping, map_balanced, map_min_comm, map_round_robin, utilization,
    NeuronPartition,
};
use pumpwear_core::workload::{random_network, Network, SpikeDb};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assignment(n: usize, c: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..c, n)
}

fn roomy(c: usize, n: usize) -> pumpwear_core::hardware::HardwareSpec {
    spec(c, n, n, (0..c).map(|j| j % 2).collect())
}

proptest! {
    #[test]
    fn derived_mapping_is_one_hot_on_post_crossbar(
        ((net, _db), a) in common::workload(20, 80, 50.0, 3)
            .prop_flat_map(|w| { let n = w.0.neuron_count(); (Just(w), assignment(n, 4)) })
    ) {
        let sp = roomy(4, net.neuron_count());
        let m = derive_mapping(&NeuronPartition::new(a.clone()), &net, &sp).unwrap();
        let dense = m.to_dense(4);
        for (i, syn) in net.synapses().iter().enumerate() {
            prop_assert_eq!(dense[i].iter().map(|&x| x as usize).sum::<usize>(), 1);
            prop_assert_eq!(dense[i][a[syn.post]], 1);
        }
    }

    #[test]
    fn synapse_to_pump_matches_double_sum(
        ((net, _db), a, placement) in common::workload(12, 40, 50.0, 2)
            .prop_flat_map(|w| { let n = w.0.neuron_count(); (Just(w), assignment(n, 6), proptest::collection::vec(0..3usize, 6)) })
    ) {
        let mut placement = placement;
        placement[0] = 2; // keep pump count at 3
        let sp = spec(6, 64, 64, placement.clone());
        let m = derive_mapping(&NeuronPartition::new(a), &net, &sp).unwrap();
        let dense = m.to_dense(6);
        let got = synapse_to_pump(&m, &sp);
        for (i, row) in dense.iter().enumerate() {
            let hits: Vec<usize> = (0..3)
                .filter(|&k| (0..6).map(|j| row[j] as usize * usize::from(placement[j] == k)).sum::<usize>() == 1)
                .collect();
            prop_assert_eq!(hits, vec![got[i]]);
        }
    }

    #[test]
    fn cut_and_utilization_match_tallies(
        ((net, db), a) in common::workload(12, 50, 50.0, 8)
            .prop_flat_map(|w| { let n = w.0.neuron_count(); (Just(w), assignment(n, 3)) })
    ) {
        let sp = roomy(3, net.neuron_count());
        let p = NeuronPartition::new(a.clone());
        prop_assert_eq!(cut_spike_count(&p, &net, &db), cut_of(&a, &net, &db));
        let m = derive_mapping(&p, &net, &sp).unwrap();
        let mut tally = vec![0u64; 3];
        for syn in net.synapses() {
            for _ in db.train(syn.pre) {
                tally[a[syn.post]] += 1;
            }
        }
        let u = utilization(&m, &db, &net, &sp);
        prop_assert_eq!(u.iter().sum::<u64>(), pumpwear_core::workload::synapse_spike_counts(&net, &db).iter().sum::<u64>());
        prop_assert_eq!(u, tally);
    }

    #[test]
    fn relabeling_crossbars_is_invariant(
        ((net, db), a, perm) in common::workload(12, 50, 50.0, 8)
            .prop_flat_map(|w| {
                let n = w.0.neuron_count();
                (Just(w), assignment(n, 4), Just((0..4usize).collect::<Vec<_>>()).prop_shuffle())
            })
    ) {
        let sp = roomy(4, net.neuron_count());
        let p = NeuronPartition::new(a.clone());
        let q = NeuronPartition::new(a.iter().map(|&c| perm[c]).collect());
        prop_assert_eq!(cut_spike_count(&p, &net, &db), cut_spike_count(&q, &net, &db));
        let mut up = utilization(&derive_mapping(&p, &net, &sp).unwrap(), &db, &net, &sp);
        let mut uq = utilization(&derive_mapping(&q, &net, &sp).unwrap(), &db, &net, &sp);
        up.sort_unstable();
        uq.sort_unstable();
        prop_assert_eq!(up, uq);
    }

    #[test]
    fn balanced_within_four_thirds_of_optimum((net, db) in common::workload(8, 24, 50.0, 10), c in 2usize..4) {
        let n = net.neuron_count();
        let sp = roomy(c, n);
        let w = activation_weights(&net, &db);
        let load = |a: &[usize]| {
            let mut l = vec![0u64; c];
            for (v, &x) in a.iter().enumerate() {
                l[x] += w[v];
            }
            l.into_iter().max().unwrap()
        };
        let got = load(map_balanced(&net, &db, &sp).unwrap().as_slice());
        let mut best = u64::MAX;
        for_each_partition(n, c, |a| best = best.min(load(a)));
        prop_assert!(3 * got <= 4 * best, "{} vs optimum {}", got, best);
        // List-scheduling bound: max load <= heaviest neuron + average.
        let total: u64 = w.iter().sum();
        let max_w = *w.iter().max().unwrap();
        prop_assert!(got as f64 <= max_w as f64 + total as f64 / c as f64);
    }

    #[test]
    fn min_comm_is_feasible_local_minimum((net, db) in common::workload(10, 30, 50.0, 10), seed: u64) {
        let n = net.neuron_count();
        let sp = spec(3, n, n.div_ceil(3) + 1, vec![0, 0, 1]);
        let rr = map_round_robin(&net, &sp).unwrap();
        let mc = map_min_comm(&net, &db, &sp, seed).unwrap();
        let a = mc.as_slice().to_vec();
        prop_assert!(feasible(&a, &net, &sp));
        prop_assert!(mc.check(&net, &sp).is_ok());
        let cut = cut_of(&a, &net, &db);
        prop_assert!(cut <= cut_of(rr.as_slice(), &net, &db));
        let mut probe = a.clone();
        for v in 0..n {
            for to in 0..3 {
                let from = probe[v];
                probe[v] = to;
                prop_assert!(!(feasible(&probe, &net, &sp) && cut_of(&probe, &net, &db) < cut), "move {} -> {}", v, to);
                probe[v] = from;
            }
        }
        prop_assert_eq!(map_min_comm(&net, &db, &sp, seed).unwrap(), mc);
    }
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize, seed: u64) -> (Network, SpikeDb) {
    let s = rng.random_range(n..=3 * n);
    let net = random_network(n, s, seed).unwrap();
    let trains = (0..n)
        .map(|_| (0..rng.random_range(0..12)).map(|i| i as f64 + 0.25).collect())
        .collect();
    (net, SpikeDb::new(50.0, trains).unwrap())
}

#[test]
fn min_comm_usually_finds_global_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let runs = 20;
    let mut hits = 0;
    for seed in 0..runs {
        let (net, db) = random_instance(&mut rng, 12, seed);
        let sp = spec(3, 12, 5, vec![0, 0, 0]);
        let mc = map_min_comm(&net, &db, &sp, seed).unwrap();
        let got = cut_of(mc.as_slice(), &net, &db);
        let mut best = u64::MAX;
        for_each_partition(12, 3, |a| {
            let cut = cut_of(a, &net, &db);
            if cut < best && feasible(a, &net, &sp) {
                best = cut;
            }
        });
        assert!(got >= best);
        hits += usize::from(got == best);
    }
    println!("optimal in {hits}/{runs}");
    assert!(hits * 5 >= runs as usize * 4, "optimal in {hits}/{runs}");
}

#[test]
fn balanced_usually_has_lower_peak_utilization() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let runs = 40;
    let mut wins = 0;
    for seed in 0..runs {
        let n = rng.random_range(6..=12);
        let (net, db) = random_instance(&mut rng, n, 100 + seed);
        let sp = spec(3, n, n.div_ceil(3) + 1, vec![0, 0, 1]);
        let bal = map_balanced(&net, &db, &sp).unwrap();
        let mc = map_min_comm(&net, &db, &sp, seed).unwrap();
        let peak = |p: &NeuronPartition| {
            let m = derive_mapping(p, &net, &sp).unwrap();
            utilization(&m, &db, &net, &sp).into_iter().max().unwrap()
        };
        wins += usize::from(peak(&bal) <= peak(&mc) || bal == mc);
    }
    assert!(wins * 2 > runs as usize, "balanced peak lower in {wins}/{runs}");
}
