//! TOML configuration for hardware, NBTI constants and the aging method.
//!
//! Every key is optional; missing ones take the library defaults. Command
//! line `--set section.key=value` overrides are applied on top of the file
//! before deserializing, so they win over file values.

use std::fs;
use std::path::Path;

use pumpwear_core::hardware::{HardwareSpec, NbtiParams};
use pumpwear_core::reliability::AgingMethod;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HardwareConfig {
    pub crossbar_count: usize,
    pub crossbar_rows: usize,
    pub crossbar_cols: usize,
    pub pump_count: usize,
    pub placement: Vec<usize>,
    pub v_idle: f64,
    pub v_boost: f64,
    pub v_discharge: f64,
    pub t_pulse_ms: f64,
    pub t_recover_ms: f64,
    pub t_hop_ms: f64,
}

impl Default for HardwareConfig {
    fn default() -> Self {
        HardwareSpec::default().into()
    }
}

impl From<HardwareSpec> for HardwareConfig {
    fn from(s: HardwareSpec) -> Self {
        Self {
            crossbar_count: s.crossbar_count,
            crossbar_rows: s.crossbar_rows,
            crossbar_cols: s.crossbar_cols,
            pump_count: s.pump_count,
            placement: s.placement,
            v_idle: s.v_idle,
            v_boost: s.v_boost,
            v_discharge: s.v_discharge,
            t_pulse_ms: s.t_pulse_ms,
            t_recover_ms: s.t_recover_ms,
            t_hop_ms: s.t_hop_ms,
        }
    }
}

impl From<HardwareConfig> for HardwareSpec {
    fn from(c: HardwareConfig) -> Self {
        Self {
            crossbar_count: c.crossbar_count,
            crossbar_rows: c.crossbar_rows,
            crossbar_cols: c.crossbar_cols,
            pump_count: c.pump_count,
            placement: c.placement,
            v_idle: c.v_idle,
            v_boost: c.v_boost,
            v_discharge: c.v_discharge,
            t_pulse_ms: c.t_pulse_ms,
            t_recover_ms: c.t_recover_ms,
            t_hop_ms: c.t_hop_ms,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NbtiConfig {
    pub g0: f64,
    pub m_exp: f64,
    pub n_exp: f64,
    pub beta: f64,
    pub v_th: f64,
}

impl Default for NbtiConfig {
    fn default() -> Self {
        let p = NbtiParams::default();
        Self {
            g0: p.g0,
            m_exp: p.m_exp,
            n_exp: p.n_exp,
            beta: p.beta,
            v_th: p.v_th,
        }
    }
}

impl From<NbtiConfig> for NbtiParams {
    fn from(c: NbtiConfig) -> Self {
        Self {
            g0: c.g0,
            m_exp: c.m_exp,
            n_exp: c.n_exp,
            beta: c.beta,
            v_th: c.v_th,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgingMethodName {
    /// Equal ticks of `tick_ms` (default `t_pulse_ms`).
    #[default]
    Intervals,
    /// One term per maximal constant-voltage segment.
    Segments,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgingConfig {
    pub method: AgingMethodName,
    pub tick_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub hardware: HardwareConfig,
    pub nbti: NbtiConfig,
    pub aging: AgingConfig,
}

/// Validated runtime form of [`Config`].
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub spec: HardwareSpec,
    pub nbti: NbtiParams,
    pub aging: AgingMethod,
}

impl Config {
    pub fn settings(&self) -> Result<Settings> {
        let spec: HardwareSpec = self.hardware.clone().into();
        spec.validate()?;
        let nbti: NbtiParams = self.nbti.into();
        nbti.validate_for(&spec)?;
        let aging = match self.aging.method {
            AgingMethodName::Segments => AgingMethod::Segments,
            AgingMethodName::Intervals => {
                let tick_ms = self.aging.tick_ms.unwrap_or(spec.t_pulse_ms);
                if !(tick_ms.is_finite() && tick_ms > 0.0) {
                    return Err(Error::Config(format!("aging.tick_ms must be positive, got {tick_ms}")));
                }
                AgingMethod::Intervals { tick_ms }
            }
        };
        Ok(Settings { spec, nbti, aging })
    }
}

impl Default for Settings {
    fn default() -> Self {
        Config::default().settings().expect("defaults are valid")
    }
}

/// Applies `section.key=value` overrides to a TOML table. Values are parsed
/// as TOML (`1.5`, `[0, 1]`, `"segments"`), falling back to a bare string.
pub fn apply_overrides(table: &mut toml::Table, overrides: &[String]) -> Result<()> {
    for item in overrides {
        let (path, raw) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{item}` is not key=value")))?;
        let value = parse_value(raw.trim());
        let keys: Vec<&str> = path.trim().split('.').collect();
        let (last, parents) = keys.split_last().expect("split yields one item");
        let mut cur = &mut *table;
        for k in parents {
            cur = cur
                .entry(k.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()))
                .as_table_mut()
                .ok_or_else(|| Error::Config(format!("`{k}` in `{path}` is not a table")))?;
        }
        cur.insert(last.to_string(), value);
    }
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

pub fn parse_config(text: &str, overrides: &[String]) -> Result<Config> {
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    apply_overrides(&mut table, overrides)?;
    table.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))
}

/// Reads `path` (or starts from defaults when `None`) and applies overrides.
pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<Config> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
        None => String::new(),
    };
    parse_config(&text, overrides)
}
