//! Platform description: crossbars, charge pumps, the crossbar-to-pump
//! placement, pump voltage levels and timing, NBTI constants, and discharge
//! policies.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::mapping::MappingMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct HardwareSpec {
    pub crossbar_count: usize,
    /// Pre-neuron capacity of one crossbar.
    pub crossbar_rows: usize,
    /// Post-neuron capacity of one crossbar.
    pub crossbar_cols: usize,
    pub pump_count: usize,
    /// Pump index per crossbar (dense form of the one-hot placement matrix).
    pub placement: Vec<usize>,
    pub v_idle: f64,
    pub v_boost: f64,
    pub v_discharge: f64,
    /// Boost pulse length per served spike event.
    pub t_pulse_ms: f64,
    /// Time a discharged pump needs before it can serve a spike again.
    pub t_recover_ms: f64,
    /// Shared-bus service time per inter-crossbar spike.
    pub t_hop_ms: f64,
}

impl Default for HardwareSpec {
    /// Six 128x128 crossbars, three per pump.
    fn default() -> Self {
        Self {
            crossbar_count: 6,
            crossbar_rows: 128,
            crossbar_cols: 128,
            pump_count: 2,
            placement: alloc::vec![0, 0, 0, 1, 1, 1],
            v_idle: 1.8,
            v_boost: 3.0,
            v_discharge: 1.2,
            t_pulse_ms: 0.1,
            t_recover_ms: 1.5,
            t_hop_ms: 0.01,
        }
    }
}

/// One failed hardware invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecViolation {
    NoCrossbars,
    NoPumps,
    ZeroCapacity,
    PlacementLength { expected: usize, got: usize },
    PumpOutOfRange { crossbar: usize, pump: usize },
    VoltageOrder { v_discharge: f64, v_idle: f64, v_boost: f64 },
    Timing { field: &'static str, value: f64 },
    ThresholdNotBelowDischarge { v_th: f64, v_discharge: f64 },
}

impl fmt::Display for SpecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoCrossbars => f.write_str("crossbar_count must be positive"),
            Self::NoPumps => f.write_str("pump_count must be positive"),
            Self::ZeroCapacity => f.write_str("crossbar rows and cols must be positive"),
            Self::PlacementLength { expected, got } => {
                write!(f, "placement has {got} entries for {expected} crossbars")
            }
            Self::PumpOutOfRange { crossbar, pump } => {
                write!(f, "crossbar {crossbar} placed on missing pump {pump}")
            }
            Self::VoltageOrder {
                v_discharge,
                v_idle,
                v_boost,
            } => write!(
                f,
                "need v_discharge < v_idle < v_boost, got {v_discharge} / {v_idle} / {v_boost}"
            ),
            Self::Timing { field, value } => write!(f, "{field} out of range: {value}"),
            Self::ThresholdNotBelowDischarge { v_th, v_discharge } => {
                write!(f, "v_th {v_th} must be below v_discharge {v_discharge}")
            }
        }
    }
}

impl HardwareSpec {
    /// Collects every violated invariant; `Ok` iff there are none.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if self.crossbar_count == 0 {
            bad.push(SpecViolation::NoCrossbars);
        }
        if self.pump_count == 0 {
            bad.push(SpecViolation::NoPumps);
        }
        if self.crossbar_rows == 0 || self.crossbar_cols == 0 {
            bad.push(SpecViolation::ZeroCapacity);
        }
        if self.placement.len() != self.crossbar_count {
            bad.push(SpecViolation::PlacementLength {
                expected: self.crossbar_count,
                got: self.placement.len(),
            });
        }
        for (crossbar, &pump) in self.placement.iter().enumerate() {
            if pump >= self.pump_count {
                bad.push(SpecViolation::PumpOutOfRange { crossbar, pump });
            }
        }
        let volts = [self.v_discharge, self.v_idle, self.v_boost];
        if !(volts.iter().all(|v| v.is_finite())
            && self.v_discharge < self.v_idle
            && self.v_idle < self.v_boost)
        {
            bad.push(SpecViolation::VoltageOrder {
                v_discharge: self.v_discharge,
                v_idle: self.v_idle,
                v_boost: self.v_boost,
            });
        }
        if !(self.t_pulse_ms.is_finite() && self.t_pulse_ms > 0.0) {
            bad.push(SpecViolation::Timing {
                field: "t_pulse_ms",
                value: self.t_pulse_ms,
            });
        }
        for (field, value) in [("t_recover_ms", self.t_recover_ms), ("t_hop_ms", self.t_hop_ms)] {
            if !(value.is_finite() && value >= 0.0) {
                bad.push(SpecViolation::Timing { field, value });
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(bad))
        }
    }

    /// Number of crossbars each pump powers.
    pub fn crossbars_per_pump(&self) -> Vec<usize> {
        let mut n = alloc::vec![0; self.pump_count];
        for &k in &self.placement {
            n[k] += 1;
        }
        n
    }
}

/// Generated-defect power-law constants. The defaults are uncalibrated
/// placeholders; only ratios and orderings are meaningful with them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbtiParams {
    pub g0: f64,
    /// Voltage exponent.
    pub m_exp: f64,
    /// Time exponent.
    pub n_exp: f64,
    /// Reliability shape exponent.
    pub beta: f64,
    pub v_th: f64,
}

impl Default for NbtiParams {
    fn default() -> Self {
        Self {
            g0: 1.0,
            m_exp: 2.0,
            n_exp: 0.2,
            beta: 1.0,
            v_th: 0.45,
        }
    }
}

impl NbtiParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.g0, self.m_exp, self.n_exp, self.beta, self.v_th]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidNbti("parameters must be finite"));
        }
        if self.g0 <= 0.0 {
            return Err(Error::InvalidNbti("g0 must be positive"));
        }
        if self.m_exp <= 0.0 {
            return Err(Error::InvalidNbti("m_exp must be positive"));
        }
        if !(self.n_exp > 0.0 && self.n_exp <= 1.0) {
            return Err(Error::InvalidNbti("n_exp must be in (0, 1]"));
        }
        if self.beta <= 0.0 {
            return Err(Error::InvalidNbti("beta must be positive"));
        }
        if self.v_th < 0.0 {
            return Err(Error::InvalidNbti("v_th must be non-negative"));
        }
        Ok(())
    }

    /// Also requires every operating level of `spec` to be stress-positive.
    pub fn validate_for(&self, spec: &HardwareSpec) -> Result<()> {
        self.validate()?;
        if self.v_th >= spec.v_discharge {
            return Err(Error::InvalidSpec(alloc::vec![
                SpecViolation::ThresholdNotBelowDischarge {
                    v_th: self.v_th,
                    v_discharge: spec.v_discharge,
                }
            ]));
        }
        Ok(())
    }
}

/// When a stressed pump is forced down to `v_discharge`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DischargePolicy {
    /// Idle between boosts for the whole run.
    Never,
    /// Discharge after every boost; recover on the next event.
    PerSpike,
    /// Discharge at every multiple of the interval and recover for
    /// `t_recover_ms`.
    FixedInterval { interval_ms: f64 },
}

impl DischargePolicy {
    pub fn validate(&self, spec: &HardwareSpec) -> Result<()> {
        if let DischargePolicy::FixedInterval { interval_ms } = *self {
            if !(interval_ms.is_finite() && interval_ms > 0.0) {
                return Err(Error::InvalidPolicy(format!(
                    "interval must be positive, got {interval_ms}"
                )));
            }
            // Back-to-back windows would never let the pump serve a spike.
            if interval_ms <= spec.t_recover_ms {
                return Err(Error::InvalidPolicy(format!(
                    "interval {interval_ms} ms does not exceed recovery time {} ms",
                    spec.t_recover_ms
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for DischargePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DischargePolicy::Never => f.write_str("never"),
            DischargePolicy::PerSpike => f.write_str("perspike"),
            DischargePolicy::FixedInterval { interval_ms } => write!(f, "interval:{interval_ms}"),
        }
    }
}

impl core::str::FromStr for DischargePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "never" => Ok(DischargePolicy::Never),
            "perspike" => Ok(DischargePolicy::PerSpike),
            _ => {
                let ms = s
                    .strip_prefix("interval:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidPolicy(format!("unrecognized policy `{s}`")))?;
                if !(ms.is_finite() && ms > 0.0) {
                    return Err(Error::InvalidPolicy(format!(
                        "interval must be positive, got {ms}"
                    )));
                }
                Ok(DischargePolicy::FixedInterval { interval_ms: ms })
            }
        }
    }
}

/// Composes the synapse-to-crossbar and crossbar-to-pump maps: entry `i` is
/// the unique pump `k` with `m_ij * p_jk = 1`.
pub fn synapse_to_pump(mapping: &MappingMatrix, spec: &HardwareSpec) -> Vec<usize> {
    mapping
        .crossbars()
        .iter()
        .map(|&j| spec.placement[j])
        .collect()
}
