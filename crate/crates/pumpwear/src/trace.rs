//! Line-oriented text formats.
//!
//! Trace:
//!
//! ```text
//! # comment
//! T_MS=60
//! NEURONS=3
//! SYN,<id>,<pre>,<post>,<weight>
//! SPK,<neuron>,<time_ms>
//! ```
//!
//! Synapse ids must be `0..S` (any order). Spikes of one neuron must appear
//! in strictly increasing time order. Blank lines and `#` comments are
//! ignored everywhere. The writer emits the header, then synapses by id, then
//! spikes sorted by `(neuron, time)`; floats use the shortest round-trip
//! representation, so write-then-load is exact.
//!
//! Mapping: one `NRN,<neuron>,<crossbar>` line per neuron.
//!
//! Schedule dump: one `PUMP,<k>,<start_ms>,<end_ms>,<volts>` line per segment.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use pumpwear_core::engine::VoltageSchedule;
use pumpwear_core::mapping::NeuronPartition;
use pumpwear_core::workload::{Network, SpikeDb, Synapse};
use pumpwear_core::Error as CoreError;

use crate::error::{Error, Result};

/// A network and its spike database, as stored in one trace file.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub network: Network,
    pub spikes: SpikeDb,
}

fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        (!line.is_empty() && !line.starts_with('#')).then_some((i + 1, line))
    })
}

fn field<T: FromStr>(line: usize, parts: &[&str], idx: usize, what: &str) -> Result<T> {
    let raw = parts.get(idx).ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    raw.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} `{raw}`"),
    })
}

fn arity(line: usize, parts: &[&str], n: usize, tag: &str) -> Result<()> {
    if parts.len() != n {
        return Err(Error::Parse {
            line,
            msg: format!("{tag} record needs {} fields, found {}", n - 1, parts.len() - 1),
        });
    }
    Ok(())
}

fn header<T: FromStr>(line: usize, slot: &mut Option<T>, key: &str, value: &str) -> Result<()> {
    if slot.is_some() {
        return Err(Error::Parse {
            line,
            msg: format!("duplicate {key}"),
        });
    }
    *slot = Some(value.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {key} `{value}`"),
    })?);
    Ok(())
}

pub fn parse_trace(text: &str) -> Result<Trace> {
    let mut horizon: Option<f64> = None;
    let mut neurons: Option<usize> = None;
    // (line, id, synapse)
    let mut syns: Vec<(usize, usize, Synapse, &str)> = Vec::new();
    // (line, neuron, time)
    let mut spikes: Vec<(usize, usize, f64, &str)> = Vec::new();

    for (line, rec) in records(text) {
        if let Some(v) = rec.strip_prefix("T_MS=") {
            header(line, &mut horizon, "T_MS", v)?;
            continue;
        }
        if let Some(v) = rec.strip_prefix("NEURONS=") {
            header(line, &mut neurons, "NEURONS", v)?;
            continue;
        }
        let parts: Vec<&str> = rec.split(',').collect();
        match parts[0].trim() {
            "SYN" => {
                arity(line, &parts, 5, "SYN")?;
                let id = field(line, &parts, 1, "synapse id")?;
                let pre = field(line, &parts, 2, "pre neuron")?;
                let post = field(line, &parts, 3, "post neuron")?;
                let weight = field(line, &parts, 4, "weight")?;
                syns.push((line, id, Synapse::new(pre, post, weight), rec));
            }
            "SPK" => {
                arity(line, &parts, 3, "SPK")?;
                let n = field(line, &parts, 1, "neuron")?;
                let t = field(line, &parts, 2, "time")?;
                spikes.push((line, n, t, rec));
            }
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown record `{other}`"),
                })
            }
        }
    }

    let horizon = horizon.ok_or(Error::Parse {
        line: 0,
        msg: "missing T_MS header".into(),
    })?;
    let neurons = neurons.ok_or(Error::Parse {
        line: 0,
        msg: "missing NEURONS header".into(),
    })?;
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(Error::Parse {
            line: 0,
            msg: format!("T_MS must be finite and non-negative, got {horizon}"),
        });
    }

    let mut by_id: Vec<Option<Synapse>> = vec![None; syns.len()];
    for &(line, id, syn, rec) in &syns {
        match by_id.get_mut(id) {
            Some(slot @ None) => *slot = Some(syn),
            Some(Some(_)) => {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate synapse id {id} in `{rec}`"),
                })
            }
            None => {
                return Err(Error::Parse {
                    line,
                    msg: format!("synapse id {id} outside 0..{} in `{rec}`", syns.len()),
                })
            }
        }
    }
    let synapse_list: Vec<Synapse> = by_id.into_iter().map(|s| s.expect("ids are dense")).collect();
    let network = Network::new(neurons, synapse_list).map_err(|e| {
        let line = first_line_for(&e, &syns).unwrap_or(0);
        let record = syns.iter().find(|s| s.0 == line).map_or(String::new(), |s| s.3.to_string());
        Error::Record {
            line,
            record,
            source: e,
        }
    })?;

    let mut trains: Vec<Vec<f64>> = vec![Vec::new(); neurons];
    for &(line, n, t, rec) in &spikes {
        let reject = |source| Error::Record {
            line,
            record: rec.to_string(),
            source,
        };
        if n >= neurons {
            return Err(Error::Parse {
                line,
                msg: format!("neuron {n} outside 0..{neurons} in `{rec}`"),
            });
        }
        let train = &mut trains[n];
        if !(t.is_finite() && t >= 0.0) {
            return Err(reject(CoreError::InvalidTime { neuron: n, time: t }));
        }
        if t > horizon {
            return Err(reject(CoreError::TimeExceedsHorizon {
                neuron: n,
                time: t,
                horizon,
            }));
        }
        if let Some(&prev) = train.last() {
            if t <= prev {
                return Err(reject(CoreError::UnsortedTrain {
                    neuron: n,
                    index: train.len(),
                    prev,
                    time: t,
                }));
            }
        }
        train.push(t);
    }
    let spikes = SpikeDb::new(horizon, trains)?;
    Ok(Trace { network, spikes })
}

fn first_line_for(e: &CoreError, syns: &[(usize, usize, Synapse, &str)]) -> Option<usize> {
    let id = match *e {
        CoreError::NeuronOutOfRange { synapse, .. }
        | CoreError::SelfLoop { synapse, .. }
        | CoreError::NonFiniteWeight { synapse }
        | CoreError::DuplicateSynapse { synapse, .. } => synapse,
        _ => return None,
    };
    syns.iter().find(|s| s.1 == id).map(|s| s.0)
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<Trace> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trace(&text)
}

pub fn format_trace(network: &Network, spikes: &SpikeDb) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "T_MS={}", spikes.horizon_ms());
    let _ = writeln!(out, "NEURONS={}", network.neuron_count());
    for (id, s) in network.synapses().iter().enumerate() {
        let _ = writeln!(out, "SYN,{id},{},{},{}", s.pre, s.post, s.weight);
    }
    for (n, train) in spikes.trains().iter().enumerate() {
        for t in train {
            let _ = writeln!(out, "SPK,{n},{t}");
        }
    }
    out
}

pub fn write_trace(path: impl AsRef<Path>, network: &Network, spikes: &SpikeDb) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_trace(network, spikes)).map_err(|e| Error::io(path, e))
}

pub fn parse_partition(text: &str, neurons: usize) -> Result<NeuronPartition> {
    let mut assign: Vec<Option<usize>> = vec![None; neurons];
    for (line, rec) in records(text) {
        let parts: Vec<&str> = rec.split(',').collect();
        if parts[0].trim() != "NRN" {
            return Err(Error::Parse {
                line,
                msg: format!("expected NRN record, found `{rec}`"),
            });
        }
        arity(line, &parts, 3, "NRN")?;
        let n: usize = field(line, &parts, 1, "neuron")?;
        let c: usize = field(line, &parts, 2, "crossbar")?;
        match assign.get_mut(n) {
            Some(slot @ None) => *slot = Some(c),
            Some(Some(_)) => {
                return Err(Error::Parse {
                    line,
                    msg: format!("neuron {n} assigned twice"),
                })
            }
            None => {
                return Err(Error::Parse {
                    line,
                    msg: format!("neuron {n} outside 0..{neurons}"),
                })
            }
        }
    }
    let assign = assign
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            c.ok_or(Error::Parse {
                line: 0,
                msg: format!("neuron {n} has no crossbar"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NeuronPartition::new(assign))
}

pub fn load_partition(path: impl AsRef<Path>, neurons: usize) -> Result<NeuronPartition> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_partition(&text, neurons)
}

pub fn format_partition(partition: &NeuronPartition) -> String {
    let mut out = String::new();
    for (n, c) in partition.as_slice().iter().enumerate() {
        let _ = writeln!(out, "NRN,{n},{c}");
    }
    out
}

pub fn write_partition(path: impl AsRef<Path>, partition: &NeuronPartition) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_partition(partition)).map_err(|e| Error::io(path, e))
}

pub fn format_schedules(schedules: &[VoltageSchedule]) -> String {
    let mut out = String::new();
    for (k, s) in schedules.iter().enumerate() {
        for g in s.segments() {
            let _ = writeln!(out, "PUMP,{k},{},{},{}", g.start_ms, g.end_ms, g.volts);
        }
    }
    out
}
