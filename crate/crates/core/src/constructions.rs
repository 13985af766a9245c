//! Explicit configurations: moment-curve (cyclic polytope) vertices, the
//! sphere maps used to move between linear and cosine scoring, ball witnesses
//! derived from separating hyperplanes, and Gaussian random configurations.

use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{domain, usage, MedError, Result};
use crate::pointset::{centroid_of, dot, norm, PointSet};
use crate::seed::rng_from_seed;
use crate::subsets::SubsetQuery;

/// Affine functional `x ↦ ⟨normal, x⟩` with threshold `offset`; the positive
/// side is `⟨normal, x⟩ > offset`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Hyperplane {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        if normal.iter().all(|v| *v == 0.0) {
            return Err(domain("hyperplane normal must be nonzero"));
        }
        Ok(Self { normal, offset })
    }

    /// `⟨normal, x⟩ - offset`.
    pub fn signed_value(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

/// Closed ball `‖x - center‖ <= radius`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallWitness {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl BallWitness {
    pub fn contains(&self, x: &[f64]) -> bool {
        crate::pointset::dist(x, &self.center) <= self.radius
    }
}

/// `(t, t², …, t^d)`.
pub fn moment_curve_point(t: f64, d: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(d);
    let mut p = 1.0;
    for _ in 0..d {
        p *= t;
        out.push(p);
    }
    out
}

/// `m` moment-curve points at `t_i = i / (m + 1)`, `i = 1..m`.
///
/// For `d = 2k` the result is k-neighborly, hence k-shattered by affine
/// functionals.
pub fn cyclic_config(m: usize, d: usize) -> Result<PointSet> {
    if m < 1 {
        return Err(usage("cyclic configuration needs m >= 1"));
    }
    if d < 1 {
        return Err(usage("cyclic configuration needs d >= 1"));
    }
    let step = 1.0 / (m as f64 + 1.0);
    let rows = (1..=m)
        .map(|i| moment_curve_point(i as f64 * step, d))
        .collect();
    PointSet::new(rows)
}

/// Scales every point to unit norm.
pub fn radial_project(x: &PointSet) -> Result<PointSet> {
    x.map_points(x.dim(), |p, out| {
        let n = norm(p);
        if n == 0.0 {
            return Err(domain("radial projection of the zero vector"));
        }
        out.extend(p.iter().map(|v| v / n));
        Ok(())
    })
}

/// `x ↦ (x, 1) / ‖(x, 1)‖`, onto the open upper hemisphere of `R^{d+1}`.
pub fn sphere_lift(x: &PointSet) -> Result<PointSet> {
    x.map_points(x.dim() + 1, |p, out| {
        let n = (dot(p, p) + 1.0).sqrt();
        out.extend(p.iter().map(|v| v / n));
        out.push(1.0 / n);
        Ok(())
    })
}

/// Relative slack added to the tight radius so boundary points stay strictly
/// inside under rounding.
pub const BALL_SLACK: f64 = 1e-6;

/// A ball containing the points of `subset` and none of the others, built
/// from a hyperplane with the subset strictly on its positive side.
///
/// The ball is tangent to the hyperplane at the foot `a₀` of the
/// perpendicular from the subset centroid, with center `a₀ + r n̂`. A point
/// at height `g = ⟨x - a₀, n̂⟩` is inside iff `‖x - a₀‖² <= 2 r g`, so
/// `r = max ‖x - a₀‖² / (2 g)` over the subset is tight and every point with
/// `g < 0` is outside for any `r`.
pub fn ball_from_hyperplane(
    x: &PointSet,
    subset: &SubsetQuery,
    h: &Hyperplane,
) -> Result<BallWitness> {
    if h.normal.len() != x.dim() {
        return Err(usage("hyperplane dimension does not match the point set"));
    }
    if subset.indices().last().is_some_and(|&i| i >= x.len()) {
        return Err(usage("subset index out of range"));
    }
    for i in 0..x.len() {
        let v = h.signed_value(x.point(i));
        let inside = subset.contains(i);
        if (inside && v <= 0.0) || (!inside && v >= 0.0) {
            return Err(MedError::Precondition(format!(
                "hyperplane does not strictly separate point {i} (value {v})"
            )));
        }
    }
    let wn = norm(&h.normal);
    let unit: Vec<f64> = h.normal.iter().map(|v| v / wn).collect();
    let c = centroid_of(x, subset.indices());
    let shift = h.signed_value(&c) / (wn * wn);
    let foot: Vec<f64> = c
        .iter()
        .zip(&h.normal)
        .map(|(ci, wi)| ci - shift * wi)
        .collect();

    let mut tight = 0.0f64;
    for &i in subset.indices() {
        let p = x.point(i);
        let diff: Vec<f64> = p.iter().zip(&foot).map(|(a, b)| a - b).collect();
        let g = h.signed_value(p) / wn;
        tight = tight.max(dot(&diff, &diff) / (2.0 * g));
    }
    let radius = tight * (1.0 + BALL_SLACK);
    let center = foot
        .iter()
        .zip(&unit)
        .map(|(a, u)| a + radius * u)
        .collect();
    Ok(BallWitness { center, radius })
}

/// `m` points with i.i.d. `N(0, 1/n)` coordinates in `R^n`, deterministic in
/// `seed`.
pub fn gaussian_config(m: usize, n: usize, seed: u64) -> Result<PointSet> {
    if m < 1 || n < 1 {
        return Err(usage("gaussian configuration needs m >= 1 and n >= 1"));
    }
    let normal = Normal::new(0.0, (1.0 / n as f64).sqrt())
        .map_err(|e| domain(format!("normal distribution: {e}")))?;
    let mut rng = rng_from_seed(seed);
    let coords = (0..m * n).map(|_| normal.sample(&mut rng)).collect();
    PointSet::from_flat(n, coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(rows: &[&[f64]]) -> PointSet {
        PointSet::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn moment_curve_examples() {
        assert_eq!(moment_curve_point(0.0, 3), vec![0.0, 0.0, 0.0]);
        assert_eq!(moment_curve_point(1.0, 4), vec![1.0; 4]);
        assert_eq!(moment_curve_point(0.5, 2), vec![0.5, 0.25]);
    }

    #[test]
    fn cyclic_points_are_distinct_and_increasing() {
        let x = cyclic_config(3, 2).unwrap();
        assert_eq!(x.len(), 3);
        let t: Vec<f64> = x.iter().map(|p| p[0]).collect();
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        assert!(t[0] > 0.0 && t[2] < 1.0);
        // Not collinear: the triangle has nonzero area.
        let (a, b, c) = (x.point(0), x.point(1), x.point(2));
        let area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        assert!(area.abs() > 1e-6);
        assert!(cyclic_config(0, 2).is_err());
    }

    #[test]
    fn radial_projection_examples() {
        let x = radial_project(&ps(&[&[3.0, 4.0]])).unwrap();
        assert!((x.point(0)[0] - 0.6).abs() < 1e-15);
        assert!((x.point(0)[1] - 0.8).abs() < 1e-15);
        let unit = ps(&[&[1.0, 0.0], &[0.0, -1.0]]);
        assert_eq!(radial_project(&unit).unwrap(), unit);
        assert!(matches!(
            radial_project(&ps(&[&[0.0, 0.0]])),
            Err(MedError::Domain(_))
        ));
    }

    #[test]
    fn sphere_lift_examples() {
        assert_eq!(sphere_lift(&ps(&[&[0.0]])).unwrap().point(0), &[0.0, 1.0]);
        let r = 1.0 / 2f64.sqrt();
        let lifted = sphere_lift(&ps(&[&[1.0]])).unwrap();
        assert!((lifted.point(0)[0] - r).abs() < 1e-15 && (lifted.point(0)[1] - r).abs() < 1e-15);
        let lifted = sphere_lift(&ps(&[&[3.0, 4.0]])).unwrap();
        let s = 26f64.sqrt();
        for (got, want) in lifted.point(0).iter().zip([3.0 / s, 4.0 / s, 1.0 / s]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn ball_on_a_line() {
        let x = ps(&[&[-1.0], &[1.0]]);
        let s = SubsetQuery::new(vec![1], 2).unwrap();
        let h = Hyperplane::new(vec![1.0], 0.0).unwrap();
        let ball = ball_from_hyperplane(&x, &s, &h).unwrap();
        assert!(ball.center[0] >= 0.5);
        assert!(ball.contains(x.point(1)));
        assert!(!ball.contains(x.point(0)));
    }

    #[test]
    fn ball_around_single_point() {
        let x = ps(&[&[0.0, 0.0], &[2.0, 1.0], &[-1.0, 3.0]]);
        let s = SubsetQuery::new(vec![1], 3).unwrap();
        let h = Hyperplane::new(vec![1.0, 0.0], 1.0).unwrap();
        let ball = ball_from_hyperplane(&x, &s, &h).unwrap();
        assert!(ball.radius < 1.0);
        assert!(ball.contains(x.point(1)));
        assert!(!ball.contains(x.point(0)) && !ball.contains(x.point(2)));
    }

    #[test]
    fn ball_rejects_non_separating_hyperplane() {
        let x = ps(&[&[-1.0], &[1.0]]);
        let s = SubsetQuery::new(vec![0], 2).unwrap();
        let h = Hyperplane::new(vec![1.0], 0.0).unwrap();
        assert!(matches!(
            ball_from_hyperplane(&x, &s, &h),
            Err(MedError::Precondition(_))
        ));
    }

    #[test]
    fn gaussian_is_deterministic() {
        let a = gaussian_config(5, 7, 42).unwrap();
        let b = gaussian_config(5, 7, 42).unwrap();
        assert_eq!(a.as_flat(), b.as_flat());
        assert_ne!(a, gaussian_config(5, 7, 43).unwrap());
        assert_eq!((a.len(), a.dim()), (5, 7));
    }

    #[test]
    fn gaussian_norms_concentrate() {
        let x = gaussian_config(100, 400, 1).unwrap();
        let mean = x.iter().map(norm).sum::<f64>() / 100.0;
        assert!((0.9..=1.1).contains(&mean), "mean norm {mean}");
    }

    #[test]
    fn gaussian_pairs_are_nearly_orthogonal() {
        let hits = (0..100u64)
            .filter(|&seed| {
                let x = gaussian_config(2, 10_000, seed).unwrap();
                dot(x.point(0), x.point(1)).abs() < 0.1
            })
            .count();
        assert!(hits >= 99, "{hits}/100");
    }
}
