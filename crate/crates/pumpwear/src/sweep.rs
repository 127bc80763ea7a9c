//! Parameter sweeps over strategy x placement x policy.
//!
//! Plan file (TOML):
//!
//! ```toml
//! seed = 7
//! strategies = ["balanced", "mincomm"]
//! policies = ["never", "perspike", "interval:10"]
//! placements = [[0, 0, 0, 1, 1, 1], [0, 1, 0, 1, 0, 1]]  # optional
//!
//! [workload]
//! trace = "trace.txt"        # relative to the plan file, or:
//! # [workload.generate]
//! # neurons = 60
//!
//! [hardware]                 # optional, same keys as the config file
//! ```

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use pumpwear_core::hardware::DischargePolicy;
use pumpwear_core::mapping::NeuronPartition;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{apply_overrides, AgingConfig, Config, HardwareConfig, NbtiConfig, Settings};
use crate::error::{Error, Result, Stage};
use crate::generate::GenSpec;
use crate::pipeline::{evaluate, map_workload, normalize, row_from, RowLabel, Strategy, Workload};
use crate::report::{Format, ReportRow};
use crate::trace::load_trace;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkloadSource {
    pub trace: Option<PathBuf>,
    pub generate: Option<GenSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    #[serde(default)]
    pub seed: u64,
    pub strategies: Vec<Strategy>,
    pub policies: Vec<String>,
    /// Empty means the configured placement only.
    #[serde(default)]
    pub placements: Vec<Vec<usize>>,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub workload: WorkloadSource,
    #[serde(default)]
    pub hardware: HardwareConfig,
    #[serde(default)]
    pub nbti: NbtiConfig,
    #[serde(default)]
    pub aging: AgingConfig,
}

impl SweepPlan {
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        apply_overrides(&mut table, overrides)?;
        let plan: SweepPlan = table.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        plan.check()?;
        Ok(plan)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut plan = Self::parse(&text, overrides)?;
        if let Some(t) = &plan.workload.trace {
            if t.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                plan.workload.trace = Some(base.join(t));
            }
        }
        Ok(plan)
    }

    fn check(&self) -> Result<()> {
        if self.strategies.is_empty() || self.policies.is_empty() {
            return Err(Error::Config("plan needs at least one strategy and one policy".into()));
        }
        self.parsed_policies()?;
        match (&self.workload.trace, &self.workload.generate) {
            (Some(_), None) | (None, Some(_)) => Ok(()),
            _ => Err(Error::Config("workload needs exactly one of `trace` or `generate`".into())),
        }
    }

    pub fn parsed_policies(&self) -> Result<Vec<DischargePolicy>> {
        self.policies
            .iter()
            .map(|p| p.parse().map_err(|e: pumpwear_core::Error| Error::Config(e.to_string())))
            .collect()
    }

    pub fn config(&self) -> Config {
        Config {
            hardware: self.hardware.clone(),
            nbti: self.nbti,
            aging: self.aging,
        }
    }

    pub fn load_workload(&self) -> Result<Workload> {
        let trace = match (&self.workload.trace, &self.workload.generate) {
            (Some(path), _) => load_trace(path),
            (None, Some(g)) => g.build(self.seed),
            (None, None) => Err(Error::Config("plan has no workload".into())),
        }
        .map_err(|e| e.at(Stage::Load))?;
        Workload::new(trace)
    }
}

/// A cell that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub strategy: String,
    pub policy: String,
    pub placement_id: usize,
    pub error: String,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    pub rows: Vec<ReportRow>,
    pub failures: Vec<CellFailure>,
}

struct Cell {
    strategy: Strategy,
    placement_id: usize,
    policy: DischargePolicy,
    /// Baseline run added only for normalization.
    hidden: bool,
}

/// Runs every cell of `plan` on `workload`. Row order is strategies, then
/// placements, then policies, each in plan order, regardless of `jobs`.
pub fn run_sweep(plan: &SweepPlan, workload: &Workload, jobs: usize) -> Result<SweepOutcome> {
    let policies = plan.parsed_policies()?;
    let base = plan.config();
    let placements: Vec<Vec<usize>> = if plan.placements.is_empty() {
        vec![base.hardware.placement.clone()]
    } else {
        plan.placements.clone()
    };
    let settings: Vec<std::result::Result<Settings, String>> = placements
        .iter()
        .map(|p| {
            let mut c = base.clone();
            c.hardware.placement = p.clone();
            c.settings().map_err(|e| e.to_string())
        })
        .collect();
    // Mapping is placement-independent; the base spec fixes capacity.
    let base_settings = base.settings()?;

    let mut cells = Vec::new();
    for &strategy in &plan.strategies {
        for placement_id in 0..placements.len() {
            for &policy in &policies {
                cells.push(Cell {
                    strategy,
                    placement_id,
                    policy,
                    hidden: false,
                });
            }
            if !policies.contains(&DischargePolicy::Never) {
                cells.push(Cell {
                    strategy,
                    placement_id,
                    policy: DischargePolicy::Never,
                    hidden: true,
                });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;

    let partitions: HashMap<Strategy, std::result::Result<NeuronPartition, String>> = pool.install(|| {
        plan.strategies
            .par_iter()
            .map(|&s| (s, map_workload(s, workload, &base_settings.spec, plan.seed).map_err(|e| e.to_string())))
            .collect()
    });

    let results: Vec<std::result::Result<ReportRow, String>> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let settings = settings[cell.placement_id].as_ref().map_err(Clone::clone)?;
                let partition = partitions[&cell.strategy].as_ref().map_err(Clone::clone)?;
                let start = Instant::now();
                let ev = evaluate(workload, partition, settings, cell.policy).map_err(|e| e.to_string())?;
                let label = RowLabel {
                    seed: plan.seed,
                    strategy: cell.strategy,
                    policy: cell.policy,
                    placement_id: cell.placement_id,
                };
                let ms = start.elapsed().as_secs_f64() * 1e3;
                Ok(row_from(&label, workload, settings, &ev, ms))
            })
            .collect()
    });

    let mut never: HashMap<(Strategy, usize), ReportRow> = HashMap::new();
    for (cell, r) in cells.iter().zip(&results) {
        if let (DischargePolicy::Never, Ok(row)) = (cell.policy, r) {
            never.insert((cell.strategy, cell.placement_id), row.clone());
        }
    }

    let mut out = SweepOutcome::default();
    for (cell, r) in cells.into_iter().zip(results) {
        if cell.hidden {
            continue;
        }
        match r {
            Ok(mut row) => {
                if let Some(base) = never.get(&(cell.strategy, cell.placement_id)) {
                    normalize(&mut row, base);
                } else {
                    out.failures.push(CellFailure {
                        strategy: cell.strategy.to_string(),
                        policy: cell.policy.to_string(),
                        placement_id: cell.placement_id,
                        error: "baseline `never` run failed; normalized columns unavailable".into(),
                    });
                    continue;
                }
                out.rows.push(row);
            }
            Err(error) => out.failures.push(CellFailure {
                strategy: cell.strategy.to_string(),
                policy: cell.policy.to_string(),
                placement_id: cell.placement_id,
                error,
            }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(policies: &[&str]) -> SweepPlan {
        let text = format!(
            "seed = 3\nstrategies = [\"balanced\", \"mincomm\"]\npolicies = {policies:?}\n\
             placements = [[0,0,0,1,1,1],[0,1,0,1,0,1]]\n\
             [workload.generate]\nneurons = 20\nsynapses = 80\nhorizon_ms = 200.0\n"
        );
        SweepPlan::parse(&text, &[]).unwrap()
    }

    #[test]
    fn row_count_and_order() {
        let p = plan(&["never", "perspike", "interval:10"]);
        let w = p.load_workload().unwrap();
        let out = run_sweep(&p, &w, 2).unwrap();
        assert!(out.failures.is_empty());
        assert_eq!(out.rows.len(), 2 * 2 * 3);
        let keys: Vec<(String, usize, String)> =
            out.rows.iter().map(|r| (r.strategy.clone(), r.placement_id, r.policy.clone())).collect();
        assert_eq!(keys[0], ("balanced".into(), 0, "never".into()));
        assert_eq!(keys[4], ("balanced".into(), 1, "perspike".into()));
        assert_eq!(keys[11], ("mincomm".into(), 1, "interval:10".into()));
    }

    #[test]
    fn never_only_normalizes_to_one() {
        let p = plan(&["never"]);
        let w = p.load_workload().unwrap();
        let out = run_sweep(&p, &w, 1).unwrap();
        for r in &out.rows {
            assert_eq!(
                [r.norm_max_pump_aging, r.norm_mean_pump_aging, r.norm_max_pump_aging_sched, r.norm_mean_isi],
                [1.0; 4]
            );
        }
    }

    #[test]
    fn hidden_baseline_not_emitted() {
        let p = plan(&["perspike"]);
        let w = p.load_workload().unwrap();
        let out = run_sweep(&p, &w, 1).unwrap();
        assert_eq!(out.rows.len(), 4);
        assert!(out.rows.iter().all(|r| r.policy == "perspike" && r.norm_max_pump_aging < 1.0));
    }

    #[test]
    fn bad_cell_is_recorded_not_fatal() {
        let mut p = plan(&["never", "interval:1"]);
        p.placements.push(vec![0, 0, 0, 5, 5, 5]);
        let w = p.load_workload().unwrap();
        let out = run_sweep(&p, &w, 2).unwrap();
        // interval:1 is shorter than recovery; placement 2 names a missing pump.
        assert_eq!(out.rows.len(), 2 * 2);
        assert_eq!(out.failures.len(), 2 * 2 + 2 * 2);
    }

    #[test]
    fn job_count_does_not_change_rows() {
        let p = plan(&["never", "interval:50"]);
        let w = p.load_workload().unwrap();
        let strip = |mut rows: Vec<ReportRow>| {
            rows.iter_mut().for_each(|r| r.runtime_ms = 0.0);
            rows
        };
        let a = strip(run_sweep(&p, &w, 1).unwrap().rows);
        let b = strip(run_sweep(&p, &w, 4).unwrap().rows);
        assert_eq!(a, b);
    }

    #[test]
    fn plan_needs_one_workload() {
        let text = "strategies = [\"balanced\"]\npolicies = [\"never\"]\n[workload]\n";
        assert!(SweepPlan::parse(text, &[]).is_err());
        let text = "strategies = [\"balanced\"]\npolicies = [\"bogus\"]\n[workload.generate]\n";
        assert!(SweepPlan::parse(text, &[]).is_err());
    }
}
