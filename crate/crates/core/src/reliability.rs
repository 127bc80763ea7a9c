//! NBTI generated-defect aging.
//!
//! A segment held at voltage `V` for `dt` generates
//! `G = g0 * (V - V_th)^m * dt^n` defects; a schedule ages by the sum over its
//! constant-voltage segments and reliability follows `R = exp(-A^beta)`.
//! Voltages at or below `V_th` generate nothing.
//!
//! Two ways of slicing the horizon are supported (see [`AgingMethod`]).
//! Slicing into maximal constant-voltage segments makes `dt^n` depend on how
//! often the voltage changes: for `n < 1` every extra segment adds aging, so a
//! discharge that splits an idle stretch can raise it. Slicing into equal
//! ticks makes `dt^n` a common factor and keeps aging monotone in voltage.

use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{train_schedule, ExecutionResult, VoltageSchedule};
use crate::hardware::{DischargePolicy, HardwareSpec, NbtiParams};
use crate::mapping::MappingMatrix;

/// Defects generated by holding `volts` for `dt_ms`.
pub fn defects(volts: f64, dt_ms: f64, p: &NbtiParams) -> f64 {
    let overdrive = volts - p.v_th;
    if overdrive <= 0.0 || dt_ms <= 0.0 {
        return 0.0;
    }
    p.g0 * libm::pow(overdrive, p.m_exp) * libm::pow(dt_ms, p.n_exp)
}

/// Sum of [`defects`] over the schedule's segments.
pub fn schedule_aging(sched: &VoltageSchedule, p: &NbtiParams) -> f64 {
    sched
        .segments()
        .iter()
        .map(|s| defects(s.volts, s.duration(), p))
        .sum()
}

/// How the horizon is sliced before summing generated defects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AgingMethod {
    /// One term per maximal constant-voltage segment.
    Segments,
    /// One term per equal tick of `tick_ms`; ticks spanning a voltage change
    /// contribute their time-weighted stress.
    Intervals { tick_ms: f64 },
}

impl AgingMethod {
    /// Equal ticks at the boost-pulse resolution of `spec`.
    pub fn pulse_ticks(spec: &HardwareSpec) -> Self {
        AgingMethod::Intervals {
            tick_ms: spec.t_pulse_ms,
        }
    }
}

/// Equal-tick aging: `Σ_ticks g0 * tick^n * mean_tick((V - V_th)^m)`, which
/// reduces to `g0 * tick^(n-1) * ∫ (V - V_th)^m dt`.
pub fn interval_aging(sched: &VoltageSchedule, p: &NbtiParams, tick_ms: f64) -> f64 {
    let stress: f64 = sched
        .segments()
        .iter()
        .map(|s| {
            let overdrive = s.volts - p.v_th;
            if overdrive <= 0.0 {
                0.0
            } else {
                libm::pow(overdrive, p.m_exp) * s.duration()
            }
        })
        .sum();
    p.g0 * libm::pow(tick_ms, p.n_exp - 1.0) * stress
}

pub fn aging_with(sched: &VoltageSchedule, p: &NbtiParams, method: AgingMethod) -> f64 {
    match method {
        AgingMethod::Segments => schedule_aging(sched, p),
        AgingMethod::Intervals { tick_ms } => interval_aging(sched, p, tick_ms),
    }
}

/// Aging of the schedule a lone synapse train induces on its pump,
/// including the idle baseline over the whole horizon.
pub fn synapse_aging(
    train: &[f64],
    policy: &DischargePolicy,
    spec: &HardwareSpec,
    horizon_ms: f64,
    p: &NbtiParams,
    method: AgingMethod,
) -> f64 {
    aging_with(&train_schedule(train, policy, spec, horizon_ms), p, method)
}

/// Per-pump aging `aging_k = Σ_i Σ_j m_ij p_jk A_i` in dense form.
pub fn pump_aging(per_synapse: &[f64], mapping: &MappingMatrix, spec: &HardwareSpec) -> Vec<f64> {
    let mut out = vec![0.0; spec.pump_count];
    for (s, &a) in per_synapse.iter().enumerate() {
        out[spec.placement[mapping.crossbar_of(s)]] += a;
    }
    out
}

/// `exp(-A^beta)`.
pub fn reliability_at(aging: f64, beta: f64) -> f64 {
    libm::exp(-libm::pow(aging, beta))
}

/// Workload time until accumulated aging reaches 1 (the `R = 1/e` knee) at
/// a steady `aging_per_ms`. Infinite for a zero rate.
pub fn mttf_proxy(aging_per_ms: f64) -> f64 {
    if aging_per_ms <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / aging_per_ms
    }
}

/// Per-pump aging view of one replay.
#[derive(Debug, Clone, PartialEq)]
pub struct AgingReport {
    /// Per-synapse attribution `A_s`.
    pub per_synapse: Vec<f64>,
    /// Per-synapse attribution summed per pump.
    pub per_pump: Vec<f64>,
    /// Aging of each pump's merged schedule.
    pub schedule_based: Vec<f64>,
    /// `R(T)` from `per_pump`.
    pub reliability: Vec<f64>,
    /// `A_k^beta`, i.e. `-ln R(T)`; stays informative where `R` underflows.
    pub neg_log_reliability: Vec<f64>,
    /// [`mttf_proxy`] in ms from `per_pump` over the horizon.
    pub mttf_ms: Vec<f64>,
}

/// Ages every synapse and pump for a finished replay.
pub fn evaluate_aging(
    result: &ExecutionResult,
    synapse_trains: &[Vec<f64>],
    mapping: &MappingMatrix,
    spec: &HardwareSpec,
    p: &NbtiParams,
    method: AgingMethod,
) -> AgingReport {
    let horizon = result.horizon_ms();
    let policy = result.policy();
    let per_synapse: Vec<f64> = synapse_trains
        .iter()
        .map(|t| synapse_aging(t, &policy, spec, horizon, p, method))
        .collect();
    let per_pump = pump_aging(&per_synapse, mapping, spec);
    let schedule_based = result.schedules().iter().map(|s| aging_with(s, p, method)).collect();
    let neg_log_reliability = per_pump.iter().map(|&a| libm::pow(a, p.beta)).collect();
    let reliability = per_pump.iter().map(|&a| reliability_at(a, p.beta)).collect();
    let mttf_ms = per_pump.iter().map(|&a| mttf_proxy(a / horizon)).collect();
    AgingReport {
        per_synapse,
        per_pump,
        schedule_based,
        reliability,
        neg_log_reliability,
        mttf_ms,
    }
}
