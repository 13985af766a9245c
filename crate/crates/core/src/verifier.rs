//! Exact verification of k-shattering and k-centroid shattering.
//!
//! Free (per-subset functional) shattering is decided by LP feasibility with
//! margin-1 normalization. Cosine scoring reduces to affine separation of the
//! radially projected points; Euclidean scoring reduces to affine separation
//! of the lifted points `(x, ‖x‖²)` with a non-positive coefficient on the
//! lifted coordinate, which is exactly the family of balls (and their
//! half-space limits).

use serde::Serialize;

use crate::constructions::{ball_from_hyperplane, radial_project, BallWitness, Hyperplane};
use crate::error::{domain, usage, Result};
use crate::lp::{margin_feasible, Feasibility, VarSign};
use crate::par::{map_indexed, Exec};
use crate::pointset::{centroid_of, dist, dot, norm, PointSet};
use crate::scoring::{score, Scoring};
use crate::subsets::{enumerate_subsets_mode, subset_count, SubsetMode, SubsetQuery};

/// Score gaps at or below this value are not strict.
pub const MARGIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    /// No functional of the class separates the subset.
    Inseparable,
    /// The same point appears inside and outside the subset.
    Duplicate,
    /// Best inside and outside scores agree within [`MARGIN_TOL`].
    Tie,
    /// An outside point outscores an inside point.
    Violated,
    /// Cosine scoring against a zero centroid is undefined.
    ZeroCentroid,
    /// The LP reported feasibility but its witness did not re-validate.
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub subset: SubsetQuery,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    Hyperplane(Hyperplane),
    Ball(BallWitness),
    /// Query vector of a centroid check.
    Centroid {
        query: Vec<f64>,
    },
}

/// Verdict of a verification run. Failures and witnesses are listed in
/// subset-enumeration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShatterReport {
    pub passed: bool,
    pub total_subsets: u64,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<(SubsetQuery, Witness)>>,
    /// Smallest score gap (best outside to worst inside) across subsets.
    pub margin_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: SubsetMode,
    pub keep_witnesses: bool,
    pub exec: Exec,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            mode: SubsetMode::AtMost,
            keep_witnesses: false,
            exec: Exec::default(),
        }
    }
}

impl VerifyOptions {
    pub fn mode(mode: SubsetMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }
}

enum Outcome {
    Pass {
        margin: f64,
        witness: Witness,
    },
    Fail {
        reason: FailureReason,
        margin: Option<f64>,
    },
}

/// A hyperplane with `⟨w,x⟩ - b >= 1` on the subset and `<= -1` elsewhere,
/// if one exists.
pub fn separable_linear(x: &PointSet, subset: &SubsetQuery) -> Result<Option<Hyperplane>> {
    check_subset(x, subset)?;
    Ok(match separate_affine(x, subset) {
        Outcome::Pass {
            witness: Witness::Hyperplane(h),
            ..
        } => Some(h),
        _ => None,
    })
}

pub fn verify_k_shatter(
    x: &PointSet,
    k: usize,
    scoring: Scoring,
    mode: SubsetMode,
) -> Result<ShatterReport> {
    verify_k_shatter_with(x, k, scoring, &VerifyOptions::mode(mode))
}

pub fn verify_k_shatter_with(
    x: &PointSet,
    k: usize,
    scoring: Scoring,
    opts: &VerifyOptions,
) -> Result<ShatterReport> {
    let subsets: Vec<SubsetQuery> = enumerate_subsets_mode(x.len(), k, opts.mode)?.collect();
    let outcomes = match scoring {
        Scoring::Linear => map_indexed(opts.exec, subsets.len(), |i| {
            separate_affine(x, &subsets[i])
        }),
        Scoring::Cosine => {
            let unit = radial_project(x)?;
            map_indexed(opts.exec, subsets.len(), |i| {
                separate_affine(&unit, &subsets[i])
            })
        }
        Scoring::Euclidean => {
            map_indexed(opts.exec, subsets.len(), |i| separate_ball(x, &subsets[i]))
        }
    };
    Ok(assemble(x.len(), k, opts, subsets, outcomes))
}

pub fn verify_k_centroid_shatter(
    x: &PointSet,
    k: usize,
    scoring: Scoring,
    mode: SubsetMode,
) -> Result<ShatterReport> {
    verify_k_centroid_shatter_with(x, k, scoring, &VerifyOptions::mode(mode))
}

/// Each subset passes iff every member outscores every non-member against
/// the subset centroid by more than [`MARGIN_TOL`].
pub fn verify_k_centroid_shatter_with(
    x: &PointSet,
    k: usize,
    scoring: Scoring,
    opts: &VerifyOptions,
) -> Result<ShatterReport> {
    if scoring == Scoring::Cosine && x.iter().any(|p| norm(p) == 0.0) {
        return Err(domain("cosine scoring requires nonzero points"));
    }
    let subsets: Vec<SubsetQuery> = enumerate_subsets_mode(x.len(), k, opts.mode)?.collect();
    let outcomes = map_indexed(opts.exec, subsets.len(), |i| {
        centroid_outcome(x, &subsets[i], scoring)
    });
    Ok(assemble(x.len(), k, opts, subsets, outcomes))
}

fn assemble(
    m: usize,
    k: usize,
    opts: &VerifyOptions,
    subsets: Vec<SubsetQuery>,
    outcomes: Vec<Outcome>,
) -> ShatterReport {
    let mut failures = Vec::new();
    let mut witnesses = opts.keep_witnesses.then(Vec::new);
    let mut margin_min = f64::INFINITY;
    for (s, outcome) in subsets.into_iter().zip(outcomes) {
        match outcome {
            Outcome::Pass { margin, witness } => {
                margin_min = margin_min.min(margin);
                if let Some(w) = witnesses.as_mut() {
                    w.push((s, witness));
                }
            }
            Outcome::Fail { reason, margin } => {
                if let Some(g) = margin {
                    margin_min = margin_min.min(g);
                }
                failures.push(Failure { subset: s, reason });
            }
        }
    }
    let total_subsets = subset_count(m, k, opts.mode);
    ShatterReport {
        passed: failures.is_empty(),
        total_subsets,
        failures,
        witnesses,
        margin_min,
    }
}

fn check_subset(x: &PointSet, subset: &SubsetQuery) -> Result<()> {
    match subset.indices().last() {
        Some(&i) if i < x.len() => Ok(()),
        _ => Err(usage("subset index out of range")),
    }
}

fn has_shared_duplicate(x: &PointSet, subset: &SubsetQuery, outside: &[usize]) -> bool {
    subset
        .indices()
        .iter()
        .any(|&i| outside.iter().any(|&j| x.point(i) == x.point(j)))
}

/// `±1` per point: `+1` inside the subset.
fn sides(m: usize, subset: &SubsetQuery) -> Vec<f64> {
    (0..m)
        .map(|i| if subset.contains(i) { 1.0 } else { -1.0 })
        .collect()
}

fn separate_affine(x: &PointSet, subset: &SubsetQuery) -> Outcome {
    let m = x.len();
    let d = x.dim();
    let outside = subset.complement(m);
    if outside.is_empty() {
        let mut normal = vec![0.0; d];
        normal[0] = 1.0;
        let offset = x.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min) - 1.0;
        return Outcome::Pass {
            margin: f64::INFINITY,
            witness: Witness::Hyperplane(Hyperplane { normal, offset }),
        };
    }
    if has_shared_duplicate(x, subset, &outside) {
        return Outcome::Fail {
            reason: FailureReason::Duplicate,
            margin: None,
        };
    }
    let sign = sides(m, subset);
    // z = (w, b); row_i = σ_i (x_i, -1).
    let rows: Vec<Vec<f64>> = x
        .iter()
        .zip(&sign)
        .map(|(p, s)| p.iter().map(|v| s * v).chain([-s]).collect())
        .collect();
    let z = match margin_feasible(&rows, &vec![VarSign::Free; d + 1]) {
        Feasibility::Feasible(z) => z,
        Feasibility::Infeasible(_) => {
            return Outcome::Fail {
                reason: FailureReason::Inseparable,
                margin: None,
            }
        }
    };
    let min_value = rows
        .iter()
        .map(|r| dot(r, &z))
        .fold(f64::INFINITY, f64::min);
    if min_value.is_nan() || min_value <= 0.0 {
        return numerical();
    }
    let normal: Vec<f64> = z[..d].iter().map(|v| v / min_value).collect();
    let offset = z[d] / min_value;
    let wn = norm(&normal);
    if wn == 0.0 {
        return numerical();
    }
    Outcome::Pass {
        margin: 1.0 / wn,
        witness: Witness::Hyperplane(Hyperplane { normal, offset }),
    }
}

fn separate_ball(x: &PointSet, subset: &SubsetQuery) -> Outcome {
    let m = x.len();
    let d = x.dim();
    let outside = subset.complement(m);
    if outside.is_empty() {
        let center = centroid_of(x, subset.indices());
        let radius = x.iter().map(|p| dist(p, &center)).fold(0.0, f64::max) + 1.0;
        return Outcome::Pass {
            margin: f64::INFINITY,
            witness: Witness::Ball(BallWitness { center, radius }),
        };
    }
    if has_shared_duplicate(x, subset, &outside) {
        return Outcome::Fail {
            reason: FailureReason::Duplicate,
            margin: None,
        };
    }
    let sign = sides(m, subset);
    // z = (w, u, b) for the functional ⟨w,x⟩ - u‖x‖² - b with u >= 0.
    let rows: Vec<Vec<f64>> = x
        .iter()
        .zip(&sign)
        .map(|(p, s)| {
            p.iter()
                .map(|v| s * v)
                .chain([-s * dot(p, p), -s])
                .collect()
        })
        .collect();
    let mut signs = vec![VarSign::Free; d + 2];
    signs[d] = VarSign::NonNegative;
    let z = match margin_feasible(&rows, &signs) {
        Feasibility::Feasible(z) => z,
        Feasibility::Infeasible(_) => {
            return Outcome::Fail {
                reason: FailureReason::Inseparable,
                margin: None,
            }
        }
    };
    let w = &z[..d];
    let (u, b) = (z[d], z[d + 1]);

    let mut candidates = Vec::with_capacity(2);
    if u > 0.0 {
        let center: Vec<f64> = w.iter().map(|v| v / (2.0 * u)).collect();
        let r2 = dot(&center, &center) - b / u;
        if r2 > 0.0 {
            candidates.push(BallWitness {
                center,
                radius: r2.sqrt(),
            });
        }
    }
    if let Ok(h) = Hyperplane::new(w.to_vec(), b) {
        if let Ok(ball) = ball_from_hyperplane(x, subset, &h) {
            candidates.push(ball);
        }
    }
    for ball in candidates {
        let margin = ball_margin(x, subset, &ball);
        if margin > 0.0 {
            return Outcome::Pass {
                margin,
                witness: Witness::Ball(ball),
            };
        }
    }
    numerical()
}

/// `min(r - ‖x - c‖ inside, ‖y - c‖ - r outside)`; positive iff the ball
/// separates strictly.
fn ball_margin(x: &PointSet, subset: &SubsetQuery, ball: &BallWitness) -> f64 {
    (0..x.len())
        .map(|i| {
            let gap = ball.radius - dist(x.point(i), &ball.center);
            if subset.contains(i) {
                gap
            } else {
                -gap
            }
        })
        .fold(f64::INFINITY, f64::min)
}

fn numerical() -> Outcome {
    Outcome::Fail {
        reason: FailureReason::Numerical,
        margin: None,
    }
}

fn centroid_outcome(x: &PointSet, subset: &SubsetQuery, scoring: Scoring) -> Outcome {
    let c = centroid_of(x, subset.indices());
    if scoring == Scoring::Cosine && norm(&c) == 0.0 {
        return Outcome::Fail {
            reason: FailureReason::ZeroCentroid,
            margin: None,
        };
    }
    let mut worst_inside = f64::INFINITY;
    let mut best_outside = f64::NEG_INFINITY;
    for (i, p) in x.iter().enumerate() {
        // Dimensions agree and zero vectors were excluded above.
        let s = score(scoring, p, &c).expect("validated score inputs");
        if subset.contains(i) {
            worst_inside = worst_inside.min(s);
        } else {
            best_outside = best_outside.max(s);
        }
    }
    let gap = worst_inside - best_outside;
    if gap > MARGIN_TOL {
        Outcome::Pass {
            margin: gap,
            witness: Witness::Centroid { query: c },
        }
    } else {
        let reason = if gap.abs() <= MARGIN_TOL {
            FailureReason::Tie
        } else {
            FailureReason::Violated
        };
        Outcome::Fail {
            reason,
            margin: Some(gap),
        }
    }
}
