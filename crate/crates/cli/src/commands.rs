use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use medlab_core::constructions::{cyclic_config, gaussian_config};
use medlab_core::harness::{
    baseline_curve, find_critical_m, fit_log_linear, read_records, sweep, SearchBudget,
};
use medlab_core::optimizer::{train, StopReason, TrainConfig};
use medlab_core::verifier::{verify_k_centroid_shatter_with, verify_k_shatter_with};
use medlab_core::{med_bounds, MedError, PointSet, Result, Scoring, SubsetMode, VerifyOptions};

use crate::manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(
    name = "medlab",
    version,
    about = "Minimal embeddable dimension laboratory"
)]
pub struct Cli {
    /// Worker threads for data-parallel loops (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a point configuration as CSV.
    Construct(ConstructArgs),
    /// Check k-shattering (or k-centroid shattering) of a point set.
    Verify(VerifyArgs),
    /// Run one centroid-setting simulation.
    Simulate(SimulateArgs),
    /// Critical-dimension search over a list of universe sizes.
    Sweep(SweepArgs),
    /// Log-linear fit of a sweep results file.
    Fit(FitArgs),
    /// Critical universe size per dimension against the cubic baseline.
    CompareBaseline(CompareArgs),
    /// Tight dimension bounds per scoring function.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Cyclic,
    Gaussian,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Atmost,
    Exact,
}

impl From<ModeArg> for SubsetMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Atmost => SubsetMode::AtMost,
            ModeArg::Exact => SubsetMode::Exactly,
        }
    }
}

fn parse_scoring(s: &str) -> std::result::Result<Scoring, String> {
    s.parse().map_err(|e: MedError| e.to_string())
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write to a file (plus a manifest sidecar) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_scoring, default_value = "linear")]
    scoring: Scoring,
    #[arg(long, value_enum, default_value_t = ModeArg::Atmost)]
    mode: ModeArg,
    /// Check k-centroid shattering instead of free k-shattering.
    #[arg(long)]
    centroid: bool,
    /// Include per-subset witnesses in the report.
    #[arg(long)]
    witnesses: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
    /// Defaults to --max-steps.
    #[arg(long)]
    patience: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    lr: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Write the final embeddings as point-set CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seeds tried per probed point.
    #[arg(long, default_value_t = 3)]
    seeds: usize,
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
    /// Defaults to --max-steps.
    #[arg(long)]
    patience: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    lr: f64,
}

impl SearchArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_steps: self.max_steps,
            base_lr: self.lr,
            patience: self.patience,
            retries: self.seeds,
            seed: self.seed,
            ..SearchBudget::default()
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,40,80")]
    m_values: Vec<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 40)]
    window: usize,
    /// Search every dimension in 1..=m instead of the window.
    #[arg(long)]
    full_window: bool,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_delimiter = ',', default_value = "8,16")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 4096)]
    max_m: usize,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long)]
    k: usize,
}

pub enum Outcome {
    Success,
    Failed,
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Fit(a) => fit(a),
        Command::CompareBaseline(a) => compare(a),
        Command::Bounds(a) => bounds(a),
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn construct(a: ConstructArgs) -> Result<Outcome> {
    let x = match a.kind {
        Kind::Cyclic => cyclic_config(a.m, a.dim)?,
        Kind::Gaussian => gaussian_config(a.m, a.dim, a.seed)?,
    };
    match &a.out {
        Some(path) => {
            x.write_csv(io::BufWriter::new(File::create(path)?))?;
            RunManifest::new("construct", &a, a.seed).write_sidecar(path)?;
        }
        None => x.write_csv(io::stdout().lock())?,
    }
    Ok(Outcome::Success)
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let x = PointSet::read_csv(BufReader::new(File::open(&a.input)?))?;
    let opts = VerifyOptions {
        mode: a.mode.into(),
        keep_witnesses: a.witnesses,
        ..VerifyOptions::default()
    };
    let report = if a.centroid {
        verify_k_centroid_shatter_with(&x, a.k, a.scoring, &opts)?
    } else {
        verify_k_shatter_with(&x, a.k, a.scoring, &opts)?
    };
    let mut value = serde_json::to_value(&report).map_err(io::Error::from)?;
    value["manifest"] = json!(RunManifest::new("verify", &a, 0));
    print_json(&value)?;
    Ok(if report.passed {
        Outcome::Success
    } else {
        Outcome::Failed
    })
}

fn simulate(a: SimulateArgs) -> Result<Outcome> {
    let mut cfg = TrainConfig::new(a.m, a.k, a.dim, a.seed);
    cfg.max_steps = a.max_steps;
    cfg.patience = a.patience.unwrap_or(a.max_steps);
    cfg.base_lr = a.lr;
    cfg.mode = a.mode.into();
    let state = train(&cfg)?;
    let verdict = if state.stopped_reason == Some(StopReason::ZeroViolations) {
        let opts = VerifyOptions::mode(cfg.mode);
        let report =
            verify_k_centroid_shatter_with(&state.embeddings, a.k, Scoring::Linear, &opts)?;
        if report.passed {
            "verified"
        } else {
            "optimizer-pass/verifier-tie"
        }
    } else {
        "not-reached"
    };
    let manifest = RunManifest::new("simulate", &a, a.seed);
    if let Some(path) = &a.out {
        state
            .embeddings
            .write_csv(io::BufWriter::new(File::create(path)?))?;
        manifest.write_sidecar(path)?;
    }
    print_json(&json!({
        "min_violations": state.min_violations,
        "steps": state.step,
        "stopped_reason": state.stopped_reason.map(StopReason::as_str),
        "final_loss": state.final_loss,
        "total_pairs": state.total_pairs,
        "verdict": verdict,
        "manifest": manifest,
    }))?;
    Ok(Outcome::Success)
}

fn run_sweep(a: SweepArgs) -> Result<Outcome> {
    let budget = SearchBudget {
        window: a.window,
        full_window: a.full_window,
        ..a.search.budget()
    };
    let records = sweep(a.k, &a.m_values, &a.out, &budget)?;
    let manifest = RunManifest::new("sweep", &a, a.search.seed);
    if !records.is_empty() {
        manifest.write_sidecar(&a.out)?;
    }
    let summary: Vec<_> = records
        .iter()
        .map(|r| json!({"m": r.m, "critical_dim": r.critical_dim, "wall_time_s": r.wall_time}))
        .collect();
    let fit = fit_log_linear(&records).ok();
    print_json(&json!({"records": summary, "fit": fit, "manifest": manifest}))?;
    Ok(Outcome::Success)
}

fn fit(a: FitArgs) -> Result<Outcome> {
    let records = read_records(&a.input)?;
    let fit = fit_log_linear(&records)?;
    let mut value = serde_json::to_value(&fit).map_err(io::Error::from)?;
    value["manifest"] = json!(RunManifest::new("fit", &a, 0));
    print_json(&value)?;
    Ok(Outcome::Success)
}

fn compare(a: CompareArgs) -> Result<Outcome> {
    let budget = SearchBudget {
        max_m: a.max_m,
        ..a.search.budget()
    };
    let mut rows = Vec::new();
    for &d in &a.dims {
        let rec = find_critical_m(d, a.k, &budget)?;
        let baseline = baseline_curve(d as f64);
        log::info!(
            "dim={d}: critical m {} vs baseline {baseline:.4}",
            rec.critical_m
        );
        rows.push(json!({
            "d": d,
            "critical_m": rec.critical_m,
            "baseline_m": baseline,
            "ratio": rec.critical_m as f64 / baseline,
            "capped": rec.capped,
            "wall_time_s": rec.wall_time,
        }));
    }
    print_json(&json!({
        "k": a.k,
        "rows": rows,
        "manifest": RunManifest::new("compare-baseline", &a, a.search.seed),
    }))?;
    Ok(Outcome::Success)
}

fn bounds(a: BoundsArgs) -> Result<Outcome> {
    let rows = Scoring::ALL
        .iter()
        .map(|&s| med_bounds(a.k, s))
        .collect::<Result<Vec<_>>>()?;
    print_json(&json!(rows))?;
    Ok(Outcome::Success)
}
