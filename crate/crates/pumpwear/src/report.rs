//! Flat report rows and their CSV/JSON encodings.
//!
//! Per-pump vectors are stored as `;`-separated strings so every row has the
//! same scalar columns in both formats. Column order is the field order of
//! [`ReportRow`].

use std::fmt::Write as _;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub seed: u64,
    pub strategy: String,
    pub policy: String,
    pub placement_id: usize,
    /// Pump per crossbar, `-`-separated.
    pub placement: String,
    pub aging_method: String,
    pub neurons: usize,
    pub synapses: usize,
    pub input_spikes: u64,
    pub cut_spikes: u64,
    /// Spikes arriving at each crossbar.
    pub utilization: String,
    pub spikes_processed: u64,
    pub spikes_delayed: u64,
    pub inter_crossbar_spikes: u64,
    pub total_delay_ms: f64,
    pub policy_delay_ms: f64,
    pub bus_delay_ms: f64,
    /// Per-pump aging from per-synapse attribution.
    pub pump_aging: String,
    pub max_pump_aging: f64,
    pub mean_pump_aging: f64,
    /// Per-pump aging of the merged pump schedules.
    pub pump_aging_sched: String,
    pub max_pump_aging_sched: f64,
    pub mean_pump_aging_sched: f64,
    pub reliability: String,
    pub min_reliability: f64,
    pub max_neg_log_reliability: f64,
    /// Per-pump MTTF; `inf` for a pump that carries no synapse.
    pub mttf_ms: String,
    /// Empty when no pump carries a synapse.
    pub min_mttf_ms: Option<f64>,
    pub mean_isi_ms: f64,
    pub isi_undefined: usize,
    /// Mean fractional ISI change against the input trains.
    pub mean_isi_change: f64,
    pub isi_excluded: usize,
    /// Ratios against the `never` row of the same strategy and placement.
    pub norm_max_pump_aging: f64,
    pub norm_mean_pump_aging: f64,
    pub norm_max_pump_aging_sched: f64,
    pub norm_mean_pump_aging_sched: f64,
    pub norm_mean_isi: f64,
    pub runtime_ms: f64,
}

impl ReportRow {
    /// Every always-present numeric column.
    pub fn numeric_fields(&self) -> [f64; 25] {
        [
            self.input_spikes as f64,
            self.cut_spikes as f64,
            self.spikes_processed as f64,
            self.spikes_delayed as f64,
            self.inter_crossbar_spikes as f64,
            self.total_delay_ms,
            self.policy_delay_ms,
            self.bus_delay_ms,
            self.max_pump_aging,
            self.mean_pump_aging,
            self.max_pump_aging_sched,
            self.mean_pump_aging_sched,
            self.min_reliability,
            self.max_neg_log_reliability,
            self.mean_isi_ms,
            self.isi_undefined as f64,
            self.mean_isi_change,
            self.isi_excluded as f64,
            self.norm_max_pump_aging,
            self.norm_mean_pump_aging,
            self.norm_max_pump_aging_sched,
            self.norm_mean_pump_aging_sched,
            self.norm_mean_isi,
            self.runtime_ms,
            self.neurons as f64,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.numeric_fields().iter().all(|x| x.is_finite())
            && self.min_mttf_ms.is_none_or(f64::is_finite)
            && [&self.pump_aging, &self.pump_aging_sched, &self.reliability]
                .iter()
                .all(|s| split_list::<f64>(s).is_ok_and(|v| v.iter().all(|x| x.is_finite())))
    }
}

pub fn join_list<T: std::fmt::Display>(xs: &[T]) -> String {
    let mut out = String::new();
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        let _ = write!(out, "{x}");
    }
    out
}

pub fn split_list<T: FromStr>(s: &str) -> std::result::Result<Vec<T>, T::Err> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(str::parse).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(column_names()).map_err(report_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(report_err)?;
    }
    w.flush().map_err(|e| Error::Report(e.to_string()))
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<ReportRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<Vec<ReportRow>, _>>()
        .map_err(report_err)
}

pub fn write_json<W: Write>(rows: &[ReportRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Report(e.to_string()))?;
    out.write_all(b"\n").map_err(|e| Error::Report(e.to_string()))
}

pub fn emit_report<W: Write>(rows: &[ReportRow], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}

fn report_err(e: csv::Error) -> Error {
    Error::Report(e.to_string())
}

/// Header names in column order.
pub fn column_names() -> Vec<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(ReportRow::example()).expect("serializes");
    let bytes = w.into_inner().expect("in-memory writer");
    let text = String::from_utf8(bytes).expect("utf8");
    text.lines().next().unwrap_or_default().split(',').map(String::from).collect()
}

impl ReportRow {
    fn example() -> Self {
        Self {
            seed: 0,
            strategy: String::new(),
            policy: String::new(),
            placement_id: 0,
            placement: String::new(),
            aging_method: String::new(),
            neurons: 0,
            synapses: 0,
            input_spikes: 0,
            cut_spikes: 0,
            utilization: String::new(),
            spikes_processed: 0,
            spikes_delayed: 0,
            inter_crossbar_spikes: 0,
            total_delay_ms: 0.0,
            policy_delay_ms: 0.0,
            bus_delay_ms: 0.0,
            pump_aging: String::new(),
            max_pump_aging: 0.0,
            mean_pump_aging: 0.0,
            pump_aging_sched: String::new(),
            max_pump_aging_sched: 0.0,
            mean_pump_aging_sched: 0.0,
            reliability: String::new(),
            min_reliability: 0.0,
            max_neg_log_reliability: 0.0,
            mttf_ms: String::new(),
            min_mttf_ms: None,
            mean_isi_ms: 0.0,
            isi_undefined: 0,
            mean_isi_change: 0.0,
            isi_excluded: 0,
            norm_max_pump_aging: 1.0,
            norm_mean_pump_aging: 1.0,
            norm_max_pump_aging_sched: 1.0,
            norm_mean_pump_aging_sched: 1.0,
            norm_mean_isi: 1.0,
            runtime_ms: 0.0,
        }
    }
}
