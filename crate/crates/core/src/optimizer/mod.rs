//! Centroid-setting simulation: gradient descent on element embeddings under
//! the centroid hinge loss, with Adam, a warmup-free one-cycle schedule and
//! early stopping on zero violations or stalled progress.

mod adam;
mod loss;
mod schedule;

pub use adam::{AdamMoments, AdamParams};
pub use loss::{
    centroid_hinge_grad, centroid_hinge_grad_mode, centroid_hinge_loss, centroid_hinge_loss_mode,
    CentroidObjective, Evaluation,
};
pub use schedule::one_cycle_lr;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{usage, MedError, Result};
use crate::par::Exec;
use crate::pointset::PointSet;
use crate::scoring::Scoring;
use crate::seed::rng_from_seed;
use crate::subsets::SubsetMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub m: usize,
    pub k: usize,
    pub dim: usize,
    pub scoring: Scoring,
    pub max_steps: usize,
    /// Peak learning rate before the `1 / log2(m)` scaling.
    pub base_lr: f64,
    /// Steps without a new minimum violation count before stopping.
    pub patience: usize,
    pub seed: u64,
    pub adam: AdamParams,
    pub mode: SubsetMode,
}

impl TrainConfig {
    pub fn new(m: usize, k: usize, dim: usize, seed: u64) -> Self {
        Self {
            m,
            k,
            dim,
            scoring: Scoring::Linear,
            max_steps: 1000,
            base_lr: 1.0,
            patience: 1000,
            seed,
            adam: AdamParams::default(),
            mode: SubsetMode::Exactly,
        }
    }

    /// `1 / log2(m)`, or 1 when `m < 2`.
    pub fn lr_scale(&self) -> f64 {
        if self.m >= 2 {
            1.0 / (self.m as f64).log2()
        } else {
            1.0
        }
    }

    pub fn peak_lr(&self) -> f64 {
        self.base_lr * self.lr_scale()
    }

    pub fn validate(&self) -> Result<()> {
        if self.scoring != Scoring::Linear {
            return Err(usage(
                "the centroid simulation is defined for linear scoring",
            ));
        }
        if self.k == 0 || self.k > self.m {
            return Err(usage(format!(
                "need 1 <= k <= m, got k={} m={}",
                self.k, self.m
            )));
        }
        if self.dim == 0 {
            return Err(usage("dim must be at least 1"));
        }
        if self.max_steps == 0 {
            return Err(usage("max_steps must be at least 1"));
        }
        if !(self.base_lr > 0.0 && self.base_lr.is_finite()) {
            return Err(usage("base_lr must be positive"));
        }
        let b = &self.adam;
        if !(0.0 < b.beta1 && b.beta1 < 1.0 && 0.0 < b.beta2 && b.beta2 < 1.0 && b.eps > 0.0) {
            return Err(usage(
                "adam betas must lie in (0, 1) and eps must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    ZeroViolations,
    Patience,
    MaxSteps,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::ZeroViolations => "zero-violations",
            StopReason::Patience => "patience",
            StopReason::MaxSteps => "max-steps",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainState {
    pub embeddings: PointSet,
    pub moments: AdamMoments,
    /// Loss evaluations performed; equals `violation_history.len()`.
    pub step: usize,
    pub min_violations: u64,
    pub violation_history: Vec<u64>,
    pub stopped_reason: Option<StopReason>,
    /// Loss at the last evaluation.
    pub final_loss: f64,
    pub total_pairs: u64,
}

impl TrainState {
    /// Embeddings drawn from a standard normal distribution.
    pub fn initialize(cfg: &TrainConfig, total_pairs: u64) -> Result<Self> {
        let mut rng = rng_from_seed(cfg.seed);
        let coords: Vec<f64> = (0..cfg.m * cfg.dim)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let embeddings = PointSet::from_flat(cfg.dim, coords)?;
        Ok(Self {
            moments: AdamMoments::zeros(cfg.m * cfg.dim),
            embeddings,
            step: 0,
            min_violations: total_pairs,
            violation_history: Vec::new(),
            stopped_reason: None,
            final_loss: f64::NAN,
            total_pairs,
        })
    }

    /// Applies one Adam update; rejects non-finite gradients and updates.
    pub fn adam_step(&mut self, grad: &[f64], lr: f64, params: &AdamParams) -> Result<()> {
        if grad.len() != self.embeddings.as_flat().len() {
            return Err(usage("gradient shape does not match the embeddings"));
        }
        if let Some(pos) = grad.iter().position(|g| !g.is_finite()) {
            return Err(MedError::NonFinite {
                step: self.step,
                detail: format!("gradient entry {pos} is {}", grad[pos]),
            });
        }
        let params_buf = self.embeddings.as_flat_mut();
        self.moments.apply(params_buf, grad, lr, params);
        if let Some(pos) = params_buf.iter().position(|v| !v.is_finite()) {
            return Err(MedError::NonFinite {
                step: self.step,
                detail: format!("embedding entry {pos} diverged"),
            });
        }
        Ok(())
    }

    pub fn final_violations(&self) -> Option<u64> {
        self.violation_history.last().copied()
    }
}

/// Runs one simulation.
pub fn train(cfg: &TrainConfig) -> Result<TrainState> {
    train_with(cfg, Exec::default())
}

pub fn train_with(cfg: &TrainConfig, exec: Exec) -> Result<TrainState> {
    cfg.validate()?;
    let objective = CentroidObjective::new(cfg.m, cfg.k, cfg.mode)?;
    train_objective(cfg, &objective, exec)
}

/// Like [`train_with`] but reuses a prebuilt subset table.
pub fn train_objective(
    cfg: &TrainConfig,
    objective: &CentroidObjective,
    exec: Exec,
) -> Result<TrainState> {
    cfg.validate()?;
    if objective.m() != cfg.m || objective.k() != cfg.k || objective.mode() != cfg.mode {
        return Err(usage("objective does not match the training configuration"));
    }
    let mut state = TrainState::initialize(cfg, objective.total_pairs())?;
    let peak = cfg.peak_lr();
    let mut since_improvement = 0usize;

    for step in 0..cfg.max_steps {
        let eval = objective.evaluate(&state.embeddings, true, exec)?;
        state.step = step + 1;
        state.final_loss = eval.loss;
        state.violation_history.push(eval.violations);
        if eval.violations < state.min_violations {
            state.min_violations = eval.violations;
            since_improvement = 0;
        } else {
            since_improvement += 1;
        }
        // Stop before updating so the returned embeddings are the ones that
        // achieved the recorded count.
        if eval.violations == 0 {
            state.stopped_reason = Some(StopReason::ZeroViolations);
            return Ok(state);
        }
        if since_improvement >= cfg.patience {
            state.stopped_reason = Some(StopReason::Patience);
            return Ok(state);
        }
        let lr = one_cycle_lr(step, cfg.max_steps, peak);
        state.adam_step(&eval.grad, lr, &cfg.adam)?;
    }
    state.stopped_reason = Some(StopReason::MaxSteps);
    Ok(state)
}
