//! Centroid hinge loss and its closed-form gradient.
//!
//! For every subset `S`, member `x ∈ S` and non-member `y ∉ S` the loss adds
//! `max(0, ⟨y, c_S⟩ - ⟨x, c_S⟩)`; the total is the mean over subsets of the
//! per-subset sums. A pair with `⟨x - y, c_S⟩ < 0` is a violation.
//!
//! Evaluation works from the Gram matrix `G = E Eᵀ`: the subset scores are
//! `p_j = mean_{u∈S} G[u][j]`, and the gradient is `M E` for a symmetric
//! coefficient matrix `M` accumulated per subset. Subsets are processed in
//! fixed-size chunks whose partial results are folded in chunk order, so the
//! output bits do not depend on the execution strategy.

use crate::error::{usage, Result};
use crate::par::{map_indexed, Exec};
use crate::pointset::{dot, PointSet};
use crate::subsets::{enumerate_subsets_mode, SubsetMode};

const CHUNKS: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub loss: f64,
    pub violations: u64,
    /// Row-major, same shape as the embeddings. Empty when not requested.
    pub grad: Vec<f64>,
}

/// Precomputed subset table for one `(m, k, mode)`.
#[derive(Debug, Clone)]
pub struct CentroidObjective {
    m: usize,
    k: usize,
    mode: SubsetMode,
    flat: Vec<usize>,
    starts: Vec<usize>,
    total_pairs: u64,
}

struct Partial {
    loss: f64,
    violations: u64,
    coef: Vec<f64>,
}

impl CentroidObjective {
    pub fn new(m: usize, k: usize, mode: SubsetMode) -> Result<Self> {
        let mut flat = Vec::new();
        let mut starts = vec![0];
        let mut total_pairs = 0u64;
        for s in enumerate_subsets_mode(m, k, mode)? {
            total_pairs += (s.size() * (m - s.size())) as u64;
            flat.extend_from_slice(s.indices());
            starts.push(flat.len());
        }
        Ok(Self {
            m,
            k,
            mode,
            flat,
            starts,
            total_pairs,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> SubsetMode {
        self.mode
    }

    pub fn subset_count(&self) -> usize {
        self.starts.len() - 1
    }

    /// Number of (subset, member, non-member) triples.
    pub fn total_pairs(&self) -> u64 {
        self.total_pairs
    }

    fn subset(&self, s: usize) -> &[usize] {
        &self.flat[self.starts[s]..self.starts[s + 1]]
    }

    pub fn evaluate(&self, x: &PointSet, want_grad: bool, exec: Exec) -> Result<Evaluation> {
        if x.len() != self.m {
            return Err(usage(format!(
                "objective built for m={}, got {} points",
                self.m,
                x.len()
            )));
        }
        let m = self.m;
        let d = x.dim();
        let gram: Vec<f64> = map_indexed(exec, m, |i| {
            (0..m)
                .map(|j| dot(x.point(i), x.point(j)))
                .collect::<Vec<_>>()
        })
        .concat();

        let n = self.subset_count();
        let chunk = n.div_ceil(CHUNKS).max(1);
        let partials = map_indexed(exec, n.div_ceil(chunk), |c| {
            self.chunk(&gram, c * chunk..((c + 1) * chunk).min(n), want_grad)
        });

        let mut loss_sum = 0.0;
        let mut violations = 0;
        let mut coef = if want_grad {
            vec![0.0; m * m]
        } else {
            Vec::new()
        };
        for p in partials {
            loss_sum += p.loss;
            violations += p.violations;
            for (a, b) in coef.iter_mut().zip(&p.coef) {
                *a += b;
            }
        }
        let inv = if n > 0 { 1.0 / n as f64 } else { 0.0 };

        let grad = if want_grad {
            let rows = map_indexed(exec, m, |i| {
                let mut row = vec![0.0; d];
                for (j, &cij) in coef[i * m..(i + 1) * m].iter().enumerate() {
                    if cij != 0.0 {
                        for (r, v) in row.iter_mut().zip(x.point(j)) {
                            *r += cij * v;
                        }
                    }
                }
                row.iter_mut().for_each(|v| *v *= inv);
                row
            });
            rows.concat()
        } else {
            Vec::new()
        };
        Ok(Evaluation {
            loss: loss_sum * inv,
            violations,
            grad,
        })
    }

    fn chunk(&self, gram: &[f64], range: std::ops::Range<usize>, want_grad: bool) -> Partial {
        let m = self.m;
        let mut coef = if want_grad {
            vec![0.0; m * m]
        } else {
            Vec::new()
        };
        let mut member = vec![false; m];
        let mut scores = vec![0.0; m];
        let mut as_outside = vec![0u32; m];
        let mut as_inside = vec![0u32; m];
        let mut loss = 0.0;
        let mut violations = 0u64;

        for s in range {
            let subset = self.subset(s);
            let inv = 1.0 / subset.len() as f64;
            scores.iter_mut().for_each(|v| *v = 0.0);
            for &u in subset {
                member[u] = true;
                for (p, g) in scores.iter_mut().zip(&gram[u * m..(u + 1) * m]) {
                    *p += g;
                }
            }
            scores.iter_mut().for_each(|v| *v *= inv);

            let mut subset_loss = 0.0;
            for &i in subset {
                let pi = scores[i];
                for j in 0..m {
                    if member[j] {
                        continue;
                    }
                    let excess = scores[j] - pi;
                    if excess > 0.0 {
                        subset_loss += excess;
                        violations += 1;
                        if want_grad {
                            as_outside[j] += 1;
                            as_inside[i] += 1;
                        }
                    }
                }
            }
            loss += subset_loss;

            if want_grad {
                for j in 0..m {
                    let count = std::mem::take(&mut as_outside[j]);
                    if count > 0 {
                        let w = count as f64 * inv;
                        for &u in subset {
                            coef[j * m + u] += w;
                            coef[u * m + j] += w;
                        }
                    }
                }
                for &i in subset {
                    let count = std::mem::take(&mut as_inside[i]);
                    if count > 0 {
                        let w = count as f64 * inv;
                        for &u in subset {
                            coef[i * m + u] -= w;
                            coef[u * m + i] -= w;
                        }
                    }
                }
            }
            for &u in subset {
                member[u] = false;
            }
        }
        Partial {
            loss,
            violations,
            coef,
        }
    }
}

/// Loss and violation count over all size-`k` subsets.
pub fn centroid_hinge_loss(x: &PointSet, k: usize) -> Result<(f64, u64)> {
    centroid_hinge_loss_mode(x, k, SubsetMode::Exactly)
}

pub fn centroid_hinge_loss_mode(x: &PointSet, k: usize, mode: SubsetMode) -> Result<(f64, u64)> {
    let e = CentroidObjective::new(x.len(), k, mode)?.evaluate(x, false, Exec::default())?;
    Ok((e.loss, e.violations))
}

/// Gradient of [`centroid_hinge_loss`] with respect to every coordinate,
/// row-major. Pairs sitting exactly on the hinge contribute zero.
pub fn centroid_hinge_grad(x: &PointSet, k: usize) -> Result<Vec<f64>> {
    centroid_hinge_grad_mode(x, k, SubsetMode::Exactly)
}

pub fn centroid_hinge_grad_mode(x: &PointSet, k: usize, mode: SubsetMode) -> Result<Vec<f64>> {
    Ok(CentroidObjective::new(x.len(), k, mode)?
        .evaluate(x, true, Exec::default())?
        .grad)
}
