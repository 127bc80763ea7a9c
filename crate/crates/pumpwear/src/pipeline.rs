//! One evaluation: map, replay, measure ISI, age the pumps.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use pumpwear_core::engine::{isi_change, replay, ExecutionResult, IsiChange, IsiStats};
use pumpwear_core::hardware::{DischargePolicy, HardwareSpec};
use pumpwear_core::mapping::{
    cut_spike_count, derive_mapping, map_balanced, map_min_comm, map_round_robin, utilization, MappingMatrix,
    NeuronPartition,
};
use pumpwear_core::reliability::{evaluate_aging, AgingMethod, AgingReport};
use pumpwear_core::workload::{expand_to_synapses, SynapseTrains};
use serde::{Deserialize, Serialize};

use crate::config::Settings;
use crate::error::{Error, Result, Stage};
use crate::report::{join_list, ReportRow};
use crate::trace::Trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[value(name = "roundrobin")]
    RoundRobin,
    Balanced,
    #[value(name = "mincomm")]
    MinComm,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::RoundRobin => "roundrobin",
            Strategy::Balanced => "balanced",
            Strategy::MinComm => "mincomm",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "roundrobin" => Ok(Strategy::RoundRobin),
            "balanced" => Ok(Strategy::Balanced),
            "mincomm" => Ok(Strategy::MinComm),
            _ => Err(Error::Config(format!("unknown strategy `{s}`"))),
        }
    }
}

/// A trace plus everything derived from it that does not depend on the
/// hardware or policy.
#[derive(Debug, Clone)]
pub struct Workload {
    pub trace: Trace,
    pub synapse_trains: SynapseTrains,
    pub reference_isi: IsiStats,
}

impl Workload {
    pub fn new(trace: Trace) -> Result<Self> {
        trace.spikes.check_against(&trace.network).map_err(|e| Error::from(e).at(Stage::Load))?;
        let synapse_trains = expand_to_synapses(&trace.network, &trace.spikes);
        let reference_isi = IsiStats::from_trains(trace.spikes.trains());
        Ok(Self {
            trace,
            synapse_trains,
            reference_isi,
        })
    }
}

pub fn map_workload(strategy: Strategy, workload: &Workload, spec: &HardwareSpec, seed: u64) -> Result<NeuronPartition> {
    let (net, db) = (&workload.trace.network, &workload.trace.spikes);
    let part = match strategy {
        Strategy::RoundRobin => map_round_robin(net, spec),
        Strategy::Balanced => map_balanced(net, db, spec),
        Strategy::MinComm => map_min_comm(net, db, spec, seed),
    };
    part.map_err(|e| Error::from(e).at(Stage::Map))
}

/// Everything one replay produces.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub mapping: MappingMatrix,
    pub result: ExecutionResult,
    pub isi: IsiStats,
    pub isi_change: IsiChange,
    pub aging: AgingReport,
    pub cut_spikes: u64,
    pub utilization: Vec<u64>,
}

pub fn evaluate(
    workload: &Workload,
    partition: &NeuronPartition,
    settings: &Settings,
    policy: DischargePolicy,
) -> Result<Evaluation> {
    let (net, db, spec) = (&workload.trace.network, &workload.trace.spikes, &settings.spec);
    let mapping = derive_mapping(partition, net, spec).map_err(|e| Error::from(e).at(Stage::Map))?;
    let result = replay(net, db, partition, spec, policy).map_err(|e| Error::from(e).at(Stage::Replay))?;
    let isi = IsiStats::from_trains(result.delayed_trains());
    let change = isi_change(&workload.reference_isi, &isi).map_err(|e| Error::from(e).at(Stage::Isi))?;
    let aging = evaluate_aging(
        &result,
        workload.synapse_trains.trains(),
        &mapping,
        spec,
        &settings.nbti,
        settings.aging,
    );
    Ok(Evaluation {
        cut_spikes: cut_spike_count(partition, net, db),
        utilization: utilization(&mapping, db, net, spec),
        mapping,
        result,
        isi,
        isi_change: change,
        aging,
    })
}

fn max(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// `a / b`, or 1 when both are zero.
pub fn ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        1.0
    } else {
        a / b
    }
}

pub fn method_name(m: AgingMethod) -> String {
    match m {
        AgingMethod::Segments => "segments".into(),
        AgingMethod::Intervals { tick_ms } => format!("intervals:{tick_ms}"),
    }
}

/// Row identity that [`row_from`] cannot infer from the evaluation.
#[derive(Debug, Clone)]
pub struct RowLabel {
    pub seed: u64,
    pub strategy: Strategy,
    pub policy: DischargePolicy,
    pub placement_id: usize,
}

/// Flattens an evaluation into a report row with unit normalized columns.
pub fn row_from(label: &RowLabel, workload: &Workload, settings: &Settings, ev: &Evaluation, runtime_ms: f64) -> ReportRow {
    let a = &ev.aging;
    let c = ev.result.counters();
    ReportRow {
        seed: label.seed,
        strategy: label.strategy.to_string(),
        policy: label.policy.to_string(),
        placement_id: label.placement_id,
        placement: settings.spec.placement.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("-"),
        aging_method: method_name(settings.aging),
        neurons: workload.trace.network.neuron_count(),
        synapses: workload.trace.network.synapse_count(),
        input_spikes: workload.trace.spikes.total_spikes() as u64,
        cut_spikes: ev.cut_spikes,
        utilization: join_list(&ev.utilization),
        spikes_processed: c.spikes_processed,
        spikes_delayed: c.spikes_delayed,
        inter_crossbar_spikes: c.inter_crossbar_spikes,
        total_delay_ms: c.total_delay_ms,
        policy_delay_ms: c.policy_delay_ms,
        bus_delay_ms: c.bus_delay_ms,
        pump_aging: join_list(&a.per_pump),
        max_pump_aging: max(&a.per_pump),
        mean_pump_aging: mean(&a.per_pump),
        pump_aging_sched: join_list(&a.schedule_based),
        max_pump_aging_sched: max(&a.schedule_based),
        mean_pump_aging_sched: mean(&a.schedule_based),
        reliability: join_list(&a.reliability),
        min_reliability: min(&a.reliability),
        max_neg_log_reliability: max(&a.neg_log_reliability),
        mttf_ms: join_list(&a.mttf_ms),
        min_mttf_ms: Some(min(&a.mttf_ms)).filter(|m| m.is_finite()),
        mean_isi_ms: ev.isi.mean,
        isi_undefined: ev.isi.undefined,
        mean_isi_change: ev.isi_change.mean,
        isi_excluded: ev.isi_change.excluded.len(),
        norm_max_pump_aging: 1.0,
        norm_mean_pump_aging: 1.0,
        norm_max_pump_aging_sched: 1.0,
        norm_mean_pump_aging_sched: 1.0,
        norm_mean_isi: 1.0,
        runtime_ms,
    }
}

/// Fills the normalized columns of `row` against its `never` baseline.
pub fn normalize(row: &mut ReportRow, never: &ReportRow) {
    row.norm_max_pump_aging = ratio(row.max_pump_aging, never.max_pump_aging);
    row.norm_mean_pump_aging = ratio(row.mean_pump_aging, never.mean_pump_aging);
    row.norm_max_pump_aging_sched = ratio(row.max_pump_aging_sched, never.max_pump_aging_sched);
    row.norm_mean_pump_aging_sched = ratio(row.mean_pump_aging_sched, never.mean_pump_aging_sched);
    row.norm_mean_isi = ratio(row.mean_isi_ms, never.mean_isi_ms);
}

/// Evaluates one partition under one policy and returns a row whose
/// normalized columns are filled from a `never` replay of the same mapping.
pub fn run_single(
    label: &RowLabel,
    workload: &Workload,
    partition: &NeuronPartition,
    settings: &Settings,
) -> Result<ReportRow> {
    let start = Instant::now();
    let ev = evaluate(workload, partition, settings, label.policy)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut row = row_from(label, workload, settings, &ev, runtime_ms);
    if label.policy != DischargePolicy::Never {
        let base = evaluate(workload, partition, settings, DischargePolicy::Never)?;
        let never = row_from(label, workload, settings, &base, 0.0);
        normalize(&mut row, &never);
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::parse_trace;

    fn workload() -> Workload {
        let text = "T_MS=60\nNEURONS=3\nSYN,0,0,1,1\nSYN,1,1,2,1\n\
                    SPK,0,1\nSPK,0,4\nSPK,0,10\nSPK,1,2\nSPK,1,30\n";
        Workload::new(parse_trace(text).unwrap()).unwrap()
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [Strategy::RoundRobin, Strategy::Balanced, Strategy::MinComm] {
            assert_eq!(s.to_string().parse::<Strategy>().unwrap(), s);
        }
    }

    #[test]
    fn never_row_normalizes_to_one() {
        let w = workload();
        let settings = Settings::default();
        let part = map_workload(Strategy::RoundRobin, &w, &settings.spec, 1).unwrap();
        let label = RowLabel {
            seed: 1,
            strategy: Strategy::RoundRobin,
            policy: DischargePolicy::Never,
            placement_id: 0,
        };
        let row = run_single(&label, &w, &part, &settings).unwrap();
        assert_eq!(row.norm_max_pump_aging, 1.0);
        assert_eq!(row.norm_mean_isi, 1.0);
        assert!(row.is_finite());
        assert_eq!(row.spikes_processed, 5);
    }

    #[test]
    fn per_spike_delays_and_lowers_aging() {
        let w = workload();
        let settings = Settings::default();
        let part = map_workload(Strategy::Balanced, &w, &settings.spec, 1).unwrap();
        let label = RowLabel {
            seed: 1,
            strategy: Strategy::Balanced,
            policy: DischargePolicy::PerSpike,
            placement_id: 0,
        };
        let row = run_single(&label, &w, &part, &settings).unwrap();
        assert!(row.policy_delay_ms > 0.0);
        assert!(row.norm_max_pump_aging < 1.0);
        assert!(row.norm_mean_isi > 1.0);
    }

    #[test]
    fn replay_failure_names_stage() {
        let w = workload();
        let settings = Settings::default();
        let part = NeuronPartition::new(vec![0, 0, 9]);
        let err = evaluate(&w, &part, &settings, DischargePolicy::Never).unwrap_err();
        assert!(err.to_string().starts_with("map stage"), "{err}");
    }
}
