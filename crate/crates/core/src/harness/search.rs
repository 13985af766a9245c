use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::persist::{append_record, read_records};
use crate::error::{usage, Result};
use crate::optimizer::{train_objective, AdamParams, CentroidObjective, StopReason, TrainConfig};
use crate::par::Exec;
use crate::scoring::Scoring;
use crate::seed::derive_path;
use crate::subsets::SubsetMode;
use crate::verifier::{verify_k_centroid_shatter_with, VerifyOptions};

/// Training and search settings shared by every probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_steps: usize,
    pub base_lr: f64,
    /// `None` means `max_steps`, which makes patience inert.
    pub patience: Option<usize>,
    pub adam: AdamParams,
    pub mode: SubsetMode,
    /// Seeds tried per probed point before declaring failure.
    pub retries: usize,
    /// Root seed; probe seeds are derived from `(m, k, dim, retry)`.
    pub seed: u64,
    /// Width of the dimension window above the previous critical dimension.
    pub window: usize,
    /// Search dimensions `1..=m` instead of the window.
    pub full_window: bool,
    /// Cap on the universe size explored by [`find_critical_m`].
    pub max_m: usize,
    #[serde(skip, default)]
    pub exec: Exec,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_steps: 1000,
            base_lr: 1.0,
            patience: None,
            adam: AdamParams::default(),
            mode: SubsetMode::Exactly,
            retries: 3,
            seed: 0,
            window: 40,
            full_window: false,
            max_m: 4096,
            exec: Exec::default(),
        }
    }
}

impl SearchBudget {
    pub fn train_config(&self, m: usize, k: usize, dim: usize, seed: u64) -> TrainConfig {
        TrainConfig {
            m,
            k,
            dim,
            scoring: Scoring::Linear,
            max_steps: self.max_steps,
            base_lr: self.base_lr,
            patience: self.patience.unwrap_or(self.max_steps),
            seed,
            adam: self.adam,
            mode: self.mode,
        }
    }

    pub fn probe_seed(&self, m: usize, k: usize, dim: usize, retry: usize) -> u64 {
        derive_path(self.seed, &[m as u64, k as u64, dim as u64, retry as u64])
    }
}

/// Result of testing one `(m, k, dim)` point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub success: bool,
    /// Smallest violation count reached by any seed.
    pub min_violations: u64,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub dim: usize,
    pub min_violations: u64,
}

/// Outcome of a critical-dimension search for one universe size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalRecord {
    pub m: usize,
    pub k: usize,
    pub scoring: Scoring,
    /// `None` when no dimension in the window succeeded.
    pub critical_dim: Option<usize>,
    pub search_trace: Vec<TraceEntry>,
    pub seeds_tried: Vec<u64>,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeTraceEntry {
    pub m: usize,
    pub success: bool,
    pub min_violations: u64,
}

/// Outcome of a critical-size search for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalSizeRecord {
    pub dim: usize,
    pub k: usize,
    pub scoring: Scoring,
    /// Largest universe size that succeeded; `k` when even `k + 1` failed.
    pub critical_m: usize,
    /// True when the search stopped at `max_m` without seeing a failure.
    pub capped: bool,
    pub search_trace: Vec<SizeTraceEntry>,
    pub seeds_tried: Vec<u64>,
    pub wall_time: f64,
}

fn probe_with(objective: &CentroidObjective, dim: usize, budget: &SearchBudget) -> Result<Probe> {
    let (m, k) = (objective.m(), objective.k());
    let mut seeds = Vec::new();
    let mut best = objective.total_pairs();
    let verify_opts = VerifyOptions {
        mode: budget.mode,
        keep_witnesses: false,
        exec: budget.exec,
    };
    for retry in 0..budget.retries.max(1) {
        let seed = budget.probe_seed(m, k, dim, retry);
        seeds.push(seed);
        let cfg = budget.train_config(m, k, dim, seed);
        let state = train_objective(&cfg, objective, budget.exec)?;
        best = best.min(state.min_violations);
        if state.stopped_reason == Some(StopReason::ZeroViolations) {
            let report = verify_k_centroid_shatter_with(
                &state.embeddings,
                k,
                Scoring::Linear,
                &verify_opts,
            )?;
            if report.passed {
                log::debug!("m={m} k={k} dim={dim} seed={seed}: success");
                return Ok(Probe {
                    success: true,
                    min_violations: 0,
                    seeds,
                });
            }
            log::info!(
                "m={m} k={k} dim={dim} seed={seed}: optimizer-pass/verifier-tie (margin {:e})",
                report.margin_min
            );
        }
    }
    log::debug!("m={m} k={k} dim={dim}: failure, best violations {best}");
    Ok(Probe {
        success: false,
        min_violations: best,
        seeds,
    })
}

/// Trains up to `budget.retries` seeds at `(m, k, dim)`. Success needs zero
/// optimizer violations confirmed by the strict centroid verifier.
pub fn probe(m: usize, k: usize, dim: usize, budget: &SearchBudget) -> Result<Probe> {
    let objective = CentroidObjective::new(m, k, budget.mode)?;
    probe_with(&objective, dim, budget)
}

/// Binary search for the smallest succeeding dimension in
/// `[prev_critical + 1, prev_critical + window]`, or `[1, m]` with
/// `full_window`.
pub fn find_critical_dim(
    m: usize,
    k: usize,
    prev_critical: usize,
    budget: &SearchBudget,
) -> Result<CriticalRecord> {
    if k == 0 || k > m {
        return Err(usage(format!("need m >= k >= 1, got m={m} k={k}")));
    }
    if budget.window == 0 && !budget.full_window {
        return Err(usage("search window must be at least 1"));
    }
    let start = Instant::now();
    let objective = CentroidObjective::new(m, k, budget.mode)?;
    let (mut lo, mut hi) = if budget.full_window {
        (1, m.max(1))
    } else {
        (prev_critical + 1, prev_critical + budget.window)
    };
    let mut critical = None;
    let mut trace = Vec::new();
    let mut seeds_tried = Vec::new();
    while lo <= hi {
        let mid = ((lo + hi) / 2).max(1);
        let p = probe_with(&objective, mid, budget)?;
        trace.push(TraceEntry {
            dim: mid,
            min_violations: p.min_violations,
        });
        seeds_tried.extend(p.seeds);
        if p.success {
            critical = Some(mid);
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    Ok(CriticalRecord {
        m,
        k,
        scoring: Scoring::Linear,
        critical_dim: critical,
        search_trace: trace,
        seeds_tried,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Largest universe size that embeds in `dim`: doubling from `k + 1` until
/// the first failure, then binary search between the last success and it.
pub fn find_critical_m(dim: usize, k: usize, budget: &SearchBudget) -> Result<CriticalSizeRecord> {
    if dim == 0 || k == 0 {
        return Err(usage("need dim >= 1 and k >= 1"));
    }
    let start = Instant::now();
    let mut trace = Vec::new();
    let mut seeds_tried = Vec::new();
    let mut run = |m: usize| -> Result<bool> {
        let p = probe(m, k, dim, budget)?;
        trace.push(SizeTraceEntry {
            m,
            success: p.success,
            min_violations: p.min_violations,
        });
        seeds_tried.extend(p.seeds);
        Ok(p.success)
    };

    let mut last_success = k;
    let mut first_failure = None;
    let mut m = k + 1;
    while m <= budget.max_m.max(k + 1) {
        if run(m)? {
            last_success = m;
            m *= 2;
        } else {
            first_failure = Some(m);
            break;
        }
    }
    let capped = first_failure.is_none();
    if let Some(fail) = first_failure {
        let (mut lo, mut hi) = (last_success + 1, fail - 1);
        while lo <= hi {
            let mid = (lo + hi) / 2;
            if run(mid)? {
                last_success = mid;
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
    }
    Ok(CriticalSizeRecord {
        dim,
        k,
        scoring: Scoring::Linear,
        critical_m: last_success,
        capped,
        search_trace: trace,
        seeds_tried,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Runs [`find_critical_dim`] for each universe size, threading the previous
/// critical dimension into the next window, and appends every record to
/// `out` as soon as it is complete. Records already present in `out` for a
/// prefix of `m_values` are reused instead of recomputed.
pub fn sweep(
    k: usize,
    m_values: &[usize],
    out: &Path,
    budget: &SearchBudget,
) -> Result<Vec<CriticalRecord>> {
    if m_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("m values must be strictly increasing"));
    }
    if m_values.is_empty() {
        return Ok(Vec::new());
    }
    let mut records = if out.exists() {
        read_records(out)?
    } else {
        Vec::new()
    };
    if records.len() > m_values.len()
        || records
            .iter()
            .zip(m_values)
            .any(|(r, &m)| r.m != m || r.k != k)
    {
        return Err(usage(format!(
            "{} holds records that are not a prefix of this sweep",
            out.display()
        )));
    }
    if !records.is_empty() {
        log::info!("resuming sweep after {} stored records", records.len());
    }

    let mut prev = records.last().map_or(0, next_window_base);
    for &m in &m_values[records.len()..] {
        let rec = find_critical_dim(m, k, prev, budget)?;
        log::info!(
            "m={m} k={k}: critical dim {:?} ({:.1}s)",
            rec.critical_dim,
            rec.wall_time
        );
        if let (Some(last), Some(d)) = (
            records.last().and_then(|r: &CriticalRecord| r.critical_dim),
            rec.critical_dim,
        ) {
            if d < last {
                log::warn!("anomaly: critical dim decreased from {last} to {d} at m={m}");
            }
        }
        append_record(out, &rec)?;
        prev = next_window_base(&rec);
        records.push(rec);
    }
    Ok(records)
}

/// A failed search pushes the next window past `m`.
fn next_window_base(rec: &CriticalRecord) -> usize {
    rec.critical_dim.unwrap_or(rec.m + 1)
}
