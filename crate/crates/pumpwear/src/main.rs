use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pumpwear::config::load_config;
use pumpwear::core::engine::VoltageSchedule;
use pumpwear::core::hardware::DischargePolicy;
use pumpwear::core::mapping::{cut_spike_count, derive_mapping, utilization};
use pumpwear::generate::{GenSpec, Model};
use pumpwear::pipeline::{map_workload, run_single, RowLabel, Strategy, Workload};
use pumpwear::report::{emit_report, join_list, Format};
use pumpwear::sweep::{run_sweep, SweepPlan};
use pumpwear::trace::{format_partition, format_schedules, format_trace, load_partition, load_trace};
use pumpwear::{Error, Result, Stage};

#[derive(Parser)]
#[command(name = "pumpwear", version, about = "Charge-pump aging under discharge policies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic trace.
    Gen(GenArgs),
    /// Partition a trace's neurons onto crossbars.
    Map(MapArgs),
    /// Replay one trace under one policy and report.
    Eval(EvalArgs),
    /// Run a sweep plan.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct HwArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `hardware.t_recover_ms=2`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = Model::Poisson)]
    model: Model,
    #[arg(long, default_value_t = 60)]
    neurons: usize,
    #[arg(long, default_value_t = 600)]
    synapses: usize,
    #[arg(long, default_value_t = 1000.0)]
    horizon_ms: f64,
    /// Uniform rate, or peak rate with `--skew`.
    #[arg(long, default_value_t = 20.0)]
    rate_hz: f64,
    /// Zipf exponent for per-neuron rates; 0 gives uniform rates.
    #[arg(long, default_value_t = 0.0)]
    skew: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MapArgs {
    #[arg(long)]
    trace: PathBuf,
    #[command(flatten)]
    hw: HwArgs,
    #[arg(long, value_enum, default_value_t = Strategy::MinComm)]
    strategy: Strategy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mapping file path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    trace: PathBuf,
    #[command(flatten)]
    hw: HwArgs,
    #[arg(long, value_enum, default_value_t = Strategy::MinComm)]
    strategy: Strategy,
    /// Use this mapping file instead of running `--strategy`.
    #[arg(long)]
    mapping: Option<PathBuf>,
    /// `never`, `perspike` or `interval:<ms>`.
    #[arg(long, default_value = "never")]
    policy: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also dump pump schedules here.
    #[arg(long)]
    schedules: Option<PathBuf>,
    /// Also write the delayed trace here.
    #[arg(long)]
    delayed: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep plan (TOML).
    plan: PathBuf,
    /// Override a plan key, e.g. `hardware.t_recover_ms=2`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads; defaults to the plan value, then 1.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; defaults to the plan value, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => io::stdout().write_all(bytes).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e,
        }),
    }
}

fn gen(a: GenArgs) -> Result<()> {
    let spec = GenSpec {
        model: a.model,
        neurons: a.neurons,
        synapses: a.synapses,
        horizon_ms: a.horizon_ms,
        rate_hz: a.rate_hz,
        skew_exponent: a.skew,
        ..GenSpec::default()
    };
    let trace = spec.build(a.seed).map_err(|e| match e {
        Error::Core(c) => Error::Config(c.to_string()),
        other => other,
    })?;
    write_out(a.out.as_deref(), format_trace(&trace.network, &trace.spikes).as_bytes())
}

fn load_workload(path: &Path) -> Result<Workload> {
    Workload::new(load_trace(path)?)
}

fn map(a: MapArgs) -> Result<()> {
    let settings = load_config(a.hw.config.as_deref(), &a.hw.overrides)?.settings()?;
    let w = load_workload(&a.trace)?;
    let part = map_workload(a.strategy, &w, &settings.spec, a.seed)?;
    let (net, db) = (&w.trace.network, &w.trace.spikes);
    let mapping = derive_mapping(&part, net, &settings.spec)?;
    eprintln!("cut_spikes={}", cut_spike_count(&part, net, db));
    eprintln!("utilization={}", join_list(&utilization(&mapping, db, net, &settings.spec)));
    write_out(a.out.as_deref(), format_partition(&part).as_bytes())
}

fn eval(a: EvalArgs) -> Result<()> {
    let settings = load_config(a.hw.config.as_deref(), &a.hw.overrides)?.settings()?;
    let policy: DischargePolicy = a.policy.parse().map_err(|e: pumpwear::core::Error| Error::Config(e.to_string()))?;
    policy.validate(&settings.spec).map_err(|e| Error::Config(e.to_string()))?;
    let w = load_workload(&a.trace)?;
    let part = match &a.mapping {
        Some(p) => load_partition(p, w.trace.network.neuron_count())?,
        None => map_workload(a.strategy, &w, &settings.spec, a.seed)?,
    };
    let label = RowLabel {
        seed: a.seed,
        strategy: a.strategy,
        policy,
        placement_id: 0,
    };
    let row = run_single(&label, &w, &part, &settings)?;
    if a.schedules.is_some() || a.delayed.is_some() {
        let ev = pumpwear::pipeline::evaluate(&w, &part, &settings, policy)?;
        if let Some(p) = &a.schedules {
            let s: &[VoltageSchedule] = ev.result.schedules();
            write_out(Some(p), format_schedules(s).as_bytes())?;
        }
        if let Some(p) = &a.delayed {
            let db = ev.result.delayed_db();
            write_out(Some(p), format_trace(&w.trace.network, &db).as_bytes())?;
        }
    }
    let mut buf = Vec::new();
    emit_report(&[row], a.format, &mut buf)?;
    write_out(a.out.as_deref(), &buf)
}

fn sweep(a: SweepArgs) -> Result<()> {
    let mut plan = SweepPlan::load(&a.plan, &a.overrides)?;
    if let Some(s) = a.seed {
        plan.seed = s;
    }
    let jobs = a.jobs.or(plan.jobs).unwrap_or(1);
    let format = a.format.unwrap_or(plan.format);
    let out = a.out.or_else(|| plan.output.clone());
    let w = plan.load_workload()?;
    let outcome = run_sweep(&plan, &w, jobs)?;
    for f in &outcome.failures {
        eprintln!(
            "cell failed: strategy={} policy={} placement={}: {}",
            f.strategy, f.policy, f.placement_id, f.error
        );
    }
    let mut buf = Vec::new();
    emit_report(&outcome.rows, format, &mut buf)?;
    write_out(out.as_deref(), &buf)?;
    if outcome.rows.is_empty() && !outcome.failures.is_empty() {
        return Err(Error::Report("every sweep cell failed".into()).at(Stage::Replay));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Map(a) => map(a),
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 1 } else { 2 })
        }
    }
}
