use serde::{Deserialize, Serialize};

/// Adam hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamParams {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First and second moment accumulators for one parameter tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamMoments {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    /// Updates applied so far; bias correction uses `steps + 1`.
    pub steps: u64,
}

impl AdamMoments {
    pub fn zeros(len: usize) -> Self {
        Self {
            first: vec![0.0; len],
            second: vec![0.0; len],
            steps: 0,
        }
    }

    /// One bias-corrected update of `params` in place. The caller checks the
    /// gradient is finite.
    pub fn apply(&mut self, params: &mut [f64], grad: &[f64], lr: f64, p: &AdamParams) {
        debug_assert_eq!(params.len(), grad.len());
        self.steps += 1;
        let t = self.steps as i32;
        let bc1 = 1.0 - p.beta1.powi(t);
        let bc2_sqrt = (1.0 - p.beta2.powi(t)).sqrt();
        let step_size = lr / bc1;
        for (((x, g), m), v) in params
            .iter_mut()
            .zip(grad)
            .zip(&mut self.first)
            .zip(&mut self.second)
        {
            *m = p.beta1 * *m + (1.0 - p.beta1) * g;
            *v = p.beta2 * *v + (1.0 - p.beta2) * g * g;
            let denom = v.sqrt() / bc2_sqrt + p.eps;
            *x -= step_size * *m / denom;
        }
    }
}
