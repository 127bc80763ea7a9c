//! Event-level replay of a mapped workload.
//!
//! Each spike of a pre-neuron becomes one event per outgoing synapse. Events
//! reach their crossbar after the shared bus (cut synapses only), then wait
//! for the pump if it is recovering from a discharge. A recovery stall holds
//! back every crossbar on that pump, so the stall time is carried as a
//! per-pump lag that shifts all of its later events.

mod isi;
mod schedule;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hardware::{synapse_to_pump, DischargePolicy, HardwareSpec};
use crate::mapping::{derive_mapping, NeuronPartition};
use crate::workload::{Network, SpikeDb};

pub use isi::{compute_isi, isi_change, IsiChange, IsiStats};
pub use schedule::{Segment, VoltageSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Counters {
    /// Synapse-spike events replayed (Σ_s k_s).
    pub spikes_processed: u64,
    /// Events served later than their original time.
    pub spikes_delayed: u64,
    /// Events that crossed the interconnect.
    pub inter_crossbar_spikes: u64,
    /// Σ over events of served time minus original time.
    pub total_delay_ms: f64,
    /// Share of `total_delay_ms` spent on the bus.
    pub bus_delay_ms: f64,
    /// Share of `total_delay_ms` caused by pump recovery.
    pub policy_delay_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionResult {
    horizon_ms: f64,
    policy: DischargePolicy,
    spec: HardwareSpec,
    /// Observed firing times per neuron; may run past the horizon.
    delayed: Vec<Vec<f64>>,
    /// Merged boost pulses per pump, in served time.
    pulses: Vec<Vec<(f64, f64)>>,
    schedules: Vec<VoltageSchedule>,
    counters: Counters,
}

impl ExecutionResult {
    pub fn delayed_trains(&self) -> &[Vec<f64>] {
        &self.delayed
    }

    pub fn schedules(&self) -> &[VoltageSchedule] {
        &self.schedules
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn policy(&self) -> DischargePolicy {
        self.policy
    }

    pub fn horizon_ms(&self) -> f64 {
        self.horizon_ms
    }

    /// Boost pulses per pump, unclipped.
    pub fn pulses(&self) -> &[Vec<(f64, f64)>] {
        &self.pulses
    }

    /// Observed trains as a database whose horizon stretches to cover the
    /// latest delayed spike.
    pub fn delayed_db(&self) -> SpikeDb {
        let last = self
            .delayed
            .iter()
            .filter_map(|t| t.last().copied())
            .fold(self.horizon_ms, f64::max);
        SpikeDb::new(last, self.delayed.clone()).expect("delayed trains stay sorted")
    }
}

/// Per-pump serving state.
struct Pump {
    lag: f64,
    pulses: Vec<(f64, f64)>,
}

impl Pump {
    fn new() -> Self {
        Self {
            lag: 0.0,
            pulses: Vec::new(),
        }
    }

    /// Serves an event that reached the pump at `arrival` (before lag) and
    /// returns its served time.
    fn serve(&mut self, arrival: f64, policy: &DischargePolicy, spec: &HardwareSpec) -> f64 {
        let at = arrival + self.lag;
        let served = match *policy {
            DischargePolicy::Never => at,
            DischargePolicy::PerSpike => match self.pulses.last() {
                None => at,
                Some(&(_, end)) if at < end => at,
                Some(_) => at + spec.t_recover_ms,
            },
            DischargePolicy::FixedInterval { interval_ms } => {
                let i = libm::floor(at / interval_ms);
                let start = i * interval_ms;
                if i >= 1.0 && at < start + spec.t_recover_ms {
                    start + spec.t_recover_ms
                } else {
                    at
                }
            }
        };
        self.lag = served - arrival;
        let end = served + spec.t_pulse_ms;
        match self.pulses.last_mut() {
            Some(last) if served <= last.1 => last.1 = last.1.max(end),
            _ => self.pulses.push((served, end)),
        }
        served
    }
}

struct Event {
    time: f64,
    synapse: usize,
    spike: usize,
    bus: f64,
}

/// Replays `db` on the hardware under `policy`.
///
/// Takes the neuron partition rather than the bare synapse mapping because
/// the bus needs each synapse's pre-side crossbar as well.
pub fn replay(
    net: &Network,
    db: &SpikeDb,
    partition: &NeuronPartition,
    spec: &HardwareSpec,
    policy: DischargePolicy,
) -> Result<ExecutionResult> {
    spec.validate()?;
    policy.validate(spec)?;
    db.check_against(net)?;
    let mapping = derive_mapping(partition, net, spec)?;
    let pump_of = synapse_to_pump(&mapping, spec);
    let synapses = net.synapses();

    let mut events: Vec<Event> = Vec::new();
    for (s, syn) in synapses.iter().enumerate() {
        for (spike, &time) in db.train(syn.pre).iter().enumerate() {
            events.push(Event {
                time,
                synapse: s,
                spike,
                bus: 0.0,
            });
        }
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.synapse.cmp(&b.synapse)));

    let mut counters = Counters {
        spikes_processed: events.len() as u64,
        ..Counters::default()
    };

    // Shared FIFO bus in original-time order.
    let mut bus_free = f64::NEG_INFINITY;
    for ev in events.iter_mut() {
        let syn = &synapses[ev.synapse];
        if partition.crossbar_of(syn.pre) != partition.crossbar_of(syn.post) {
            let start = ev.time.max(bus_free);
            bus_free = start + spec.t_hop_ms;
            ev.bus = bus_free - ev.time;
            counters.inter_crossbar_spikes += 1;
        }
    }
    events.sort_by(|a, b| {
        (a.time + a.bus)
            .total_cmp(&(b.time + b.bus))
            .then(a.synapse.cmp(&b.synapse))
    });

    let mut pumps: Vec<Pump> = (0..spec.pump_count).map(|_| Pump::new()).collect();
    let mut delay: Vec<Vec<f64>> = db.trains().iter().map(|t| vec![0.0; t.len()]).collect();
    for ev in &events {
        let served = pumps[pump_of[ev.synapse]].serve(ev.time + ev.bus, &policy, spec);
        let d = served - ev.time;
        if d > 0.0 {
            counters.spikes_delayed += 1;
        }
        counters.total_delay_ms += d;
        counters.bus_delay_ms += ev.bus;
        counters.policy_delay_ms += d - ev.bus;
        let slot = &mut delay[synapses[ev.synapse].pre][ev.spike];
        *slot = slot.max(d);
    }

    let delayed: Vec<Vec<f64>> = db
        .trains()
        .iter()
        .zip(&delay)
        .map(|(train, d)| train.iter().zip(d).map(|(t, d)| t + d).collect())
        .collect();
    for (neuron, train) in delayed.iter().enumerate() {
        if train.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Inconsistent(alloc::format!(
                "delayed train of neuron {neuron} lost its order"
            )));
        }
    }

    let horizon_ms = db.horizon_ms();
    let pulses: Vec<Vec<(f64, f64)>> = pumps.into_iter().map(|p| p.pulses).collect();
    let schedules = pulses
        .iter()
        .map(|p| schedule::assemble(p, &policy, spec, horizon_ms))
        .collect();
    Ok(ExecutionResult {
        horizon_ms,
        policy,
        spec: spec.clone(),
        delayed,
        pulses,
        schedules,
        counters,
    })
}

/// Rebuilds each pump's voltage schedule from the replayed boost pulses.
pub fn build_pump_schedules(result: &ExecutionResult) -> Vec<VoltageSchedule> {
    result
        .pulses
        .iter()
        .map(|p| schedule::assemble(p, &result.policy, &result.spec, result.horizon_ms))
        .collect()
}

/// Schedule a lone train would induce on its own pump: the replay rules
/// restricted to one synapse, without interconnect.
pub fn train_schedule(train: &[f64], policy: &DischargePolicy, spec: &HardwareSpec, horizon_ms: f64) -> VoltageSchedule {
    let mut pump = Pump::new();
    for &t in train {
        pump.serve(t, policy, spec);
    }
    schedule::assemble(&pump.pulses, policy, spec, horizon_ms)
}

/// Served times of a lone train under `policy`.
pub fn train_served_times(train: &[f64], policy: &DischargePolicy, spec: &HardwareSpec) -> Vec<f64> {
    let mut pump = Pump::new();
    train.iter().map(|&t| pump.serve(t, policy, spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::Synapse;

    fn single_crossbar() -> HardwareSpec {
        HardwareSpec {
            crossbar_count: 1,
            pump_count: 1,
            placement: vec![0],
            ..HardwareSpec::default()
        }
    }

    fn one_synapse(train: Vec<f64>, horizon: f64) -> (Network, SpikeDb) {
        let net = Network::new(2, vec![Synapse::new(0, 1, 1.0)]).unwrap();
        let db = SpikeDb::new(horizon, vec![train, vec![]]).unwrap();
        (net, db)
    }

    #[test]
    fn never_single_crossbar_has_no_delay() {
        let (net, db) = one_synapse(vec![5.0, 12.0, 30.0], 60.0);
        let spec = single_crossbar();
        let part = NeuronPartition::new(vec![0, 0]);
        let r = replay(&net, &db, &part, &spec, DischargePolicy::Never).unwrap();
        assert_eq!(r.delayed_trains(), db.trains());
        assert_eq!(r.counters().total_delay_ms, 0.0);
        assert_eq!(r.counters().spikes_processed, 3);
        let volts: Vec<f64> = r.schedules()[0].segments().iter().map(|s| s.volts).collect();
        assert_eq!(volts, vec![1.8, 3.0, 1.8, 3.0, 1.8, 3.0, 1.8]);
    }

    #[test]
    fn per_spike_stretches_each_gap() {
        let (net, db) = one_synapse(vec![1.0, 4.0, 10.0], 60.0);
        let spec = single_crossbar();
        let part = NeuronPartition::new(vec![0, 0]);
        let r = replay(&net, &db, &part, &spec, DischargePolicy::PerSpike).unwrap();
        assert_eq!(r.delayed_trains()[0], vec![1.0, 5.5, 13.0]);
    }

    #[test]
    fn bus_serializes_simultaneous_cut_spikes() {
        let net = Network::new(3, vec![Synapse::new(0, 1, 1.0), Synapse::new(0, 2, 1.0)]).unwrap();
        let db = SpikeDb::new(10.0, vec![vec![2.0], vec![], vec![]]).unwrap();
        let spec = HardwareSpec {
            crossbar_count: 2,
            pump_count: 1,
            placement: vec![0, 0],
            ..HardwareSpec::default()
        };
        let part = NeuronPartition::new(vec![0, 1, 1]);
        let r = replay(&net, &db, &part, &spec, DischargePolicy::Never).unwrap();
        let c = r.counters();
        assert_eq!(c.inter_crossbar_spikes, 2);
        assert!((c.bus_delay_ms - 0.03).abs() < 1e-12);
        // Neuron 0's spike is observed once both copies are through.
        assert!((r.delayed_trains()[0][0] - 2.02).abs() < 1e-12);
    }

    #[test]
    fn interval_window_postpones_and_shifts() {
        let spec = single_crossbar();
        let policy = DischargePolicy::FixedInterval { interval_ms: 10.0 };
        // 10.5 lands in [10, 11.5): served at 11.5, lag 1.0 carries to 14.0.
        let served = train_served_times(&[5.0, 10.5, 14.0], &policy, &spec);
        assert_eq!(served, vec![5.0, 11.5, 15.0]);
    }

    #[test]
    fn rejects_interval_not_exceeding_recovery() {
        let (net, db) = one_synapse(vec![1.0], 10.0);
        let part = NeuronPartition::new(vec![0, 0]);
        let policy = DischargePolicy::FixedInterval { interval_ms: 1.5 };
        assert!(matches!(
            replay(&net, &db, &part, &single_crossbar(), policy),
            Err(Error::InvalidPolicy(_))
        ));
    }
}
