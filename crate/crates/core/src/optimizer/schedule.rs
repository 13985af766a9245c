use std::f64::consts::PI;

/// Initial learning rate is `max_lr / DIV_FACTOR`; unused without warmup but
/// it fixes the floor below.
const DIV_FACTOR: f64 = 25.0;
const FINAL_DIV_FACTOR: f64 = 1e4;

/// One-cycle schedule with no warmup: cosine annealing from `max_lr` at step
/// 0 to `max_lr / (25 · 10⁴)` at step `total - 1`.
pub fn one_cycle_lr(step: usize, total: usize, max_lr: f64) -> f64 {
    let floor = max_lr / (DIV_FACTOR * FINAL_DIV_FACTOR);
    if total <= 1 {
        return max_lr;
    }
    let pct = (step.min(total - 1)) as f64 / (total - 1) as f64;
    floor + (max_lr - floor) * 0.5 * (1.0 + (PI * pct).cos())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_midpoint() {
        assert_eq!(one_cycle_lr(0, 1000, 2.0), 2.0);
        assert!(one_cycle_lr(999, 1000, 2.0) < 0.02);
        let mid = one_cycle_lr(500, 1001, 1.0);
        assert!((mid - 0.5).abs() < 1e-5, "{mid}");
    }

    #[test]
    fn monotone_decreasing() {
        let lrs: Vec<f64> = (0..100).map(|s| one_cycle_lr(s, 100, 1.0)).collect();
        assert!(lrs.windows(2).all(|w| w[1] <= w[0]));
    }
}
