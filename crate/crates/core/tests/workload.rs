mod common;

use proptest::prelude::*;
use pumpwear_core::workload::{
    expand_to_synapses, gen_poisson, simulate_lif, synapse_spike_counts, LifParams, Network, RateProfile, Synapse,
};

#[test]
fn lif_chain_matches_hand_simulation() {
    // 0 -> 1 -> 2 with unit weights and no leak: each spike pushes the next
    // neuron straight to threshold one step later.
    let net = Network::new(3, vec![Synapse::new(0, 1, 1.0), Synapse::new(1, 2, 1.0)]).unwrap();
    let params = LifParams {
        tau_ms: None,
        horizon_ms: 40.0,
        ..LifParams::default()
    };
    let db = simulate_lif(&net, &[vec![5.0, 20.0], vec![], vec![]], &params).unwrap();
    let expect = [[5.0, 20.0], [5.1, 20.1], [5.2, 20.2]];
    for (n, want) in expect.iter().enumerate() {
        let got = db.train(n);
        assert_eq!(got.len(), 2, "neuron {n}: {got:?}");
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "neuron {n}: {got:?}");
        }
    }
}

#[test]
fn lif_subthreshold_weight_needs_two_inputs() {
    let net = Network::new(2, vec![Synapse::new(0, 1, 0.6)]).unwrap();
    let params = LifParams {
        tau_ms: None,
        horizon_ms: 30.0,
        ..LifParams::default()
    };
    let db = simulate_lif(&net, &[vec![1.0, 10.0], vec![]], &params).unwrap();
    // 0.6 after the first input, 1.2 after the second.
    assert_eq!(db.train(1).len(), 1);
    assert!((db.train(1)[0] - 10.1).abs() < 1e-9);
}

#[test]
fn skewed_rates_follow_rank_law() {
    let mut r = RateProfile::Skewed {
        max_hz: 100.0,
        exponent: 1.0,
    }
    .rates(4, 9);
    r.sort_by(|a, b| b.total_cmp(a));
    assert_eq!(r, vec![100.0, 50.0, 100.0 / 3.0, 25.0]);
}

proptest! {
    #[test]
    fn expansion_copies_pre_trains((net, db) in common::workload(10, 40, 100.0, 12)) {
        let st = expand_to_synapses(&net, &db);
        prop_assert_eq!(st.len(), net.synapse_count());
        let mut total = 0;
        for (s, syn) in net.synapses().iter().enumerate() {
            prop_assert_eq!(st.train(s), db.train(syn.pre));
            total += db.train(syn.pre).len();
        }
        prop_assert_eq!(st.total_spikes(), total);
        let counts = synapse_spike_counts(&net, &db);
        prop_assert_eq!(counts.iter().sum::<u64>() as usize, total);
    }

    #[test]
    fn poisson_output_is_valid(net in common::network(8, 20), rate in 1.0f64..500.0, horizon in 1.0f64..200.0, seed: u64) {
        let rates = vec![rate; net.neuron_count()];
        let db = gen_poisson(&net, &rates, horizon, seed).unwrap();
        for t in db.trains() {
            prop_assert!(t.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(t.iter().all(|&x| x > 0.0 && x <= horizon));
        }
        prop_assert_eq!(db, gen_poisson(&net, &rates, horizon, seed).unwrap());
    }
}
