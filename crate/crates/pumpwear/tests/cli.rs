use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pumpwear"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

#[test]
fn gen_map_eval_sweep_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(d, &["gen", "--neurons", "20", "--synapses", "80", "--horizon-ms", "300", "--seed", "4", "--out", "t.trace"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let o = run(d, &["map", "--trace", "t.trace", "--strategy", "balanced", "--out", "t.map"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cut_spikes="));
    assert_eq!(fs::read_to_string(d.join("t.map")).unwrap().lines().filter(|l| l.starts_with("NRN,")).count(), 20);

    let o = run(
        d,
        &[
            "eval", "--trace", "t.trace", "--mapping", "t.map", "--policy", "interval:10", "--format", "json",
            "--schedules", "s.csv", "--delayed", "d.trace",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<pumpwear::report::ReportRow> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].policy, "interval:10");
    assert!(rows[0].norm_max_pump_aging <= 1.0);
    assert!(fs::read_to_string(d.join("s.csv")).unwrap().starts_with("PUMP,"));
    assert!(pumpwear::trace::load_trace(d.join("d.trace")).is_ok());

    fs::write(
        d.join("plan.toml"),
        "seed = 2\nstrategies = [\"roundrobin\", \"mincomm\"]\npolicies = [\"perspike\", \"never\"]\n\
         [workload]\ntrace = \"t.trace\"\n",
    )
    .unwrap();
    let o = run(d, &["sweep", "plan.toml", "--jobs", "2", "--out", "r.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = pumpwear::report::read_csv(fs::File::open(d.join("r.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["frobnicate"])), 1);
    assert_eq!(code(&run(d, &["--help"])), 0);
    run(d, &["gen", "--neurons", "4", "--synapses", "6", "--out", "t.trace"]);
    assert_eq!(code(&run(d, &["eval", "--trace", "t.trace", "--policy", "sometimes"])), 1);
    assert_eq!(code(&run(d, &["eval", "--trace", "t.trace", "--set", "hardware.bogus=1"])), 1);
}

#[test]
fn runtime_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(d, &["eval", "--trace", "missing.trace"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.trace"));
    fs::write(d.join("bad.trace"), "T_MS=10\nNEURONS=2\nSPK,0,20\n").unwrap();
    // A malformed input file is the caller's mistake, not a runtime failure.
    let o = run(d, &["eval", "--trace", "bad.trace"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&o.stderr));
}
