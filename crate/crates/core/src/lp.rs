//! Phase-1 dense simplex for margin feasibility problems.
//!
//! Decides whether some `z` satisfies `a_i · z >= 1` for every row `a_i`,
//! with each coordinate either free or sign-constrained to `z_j >= 0`.
//! Free coordinates are split into positive and negative parts, every row
//! gets a surplus and an artificial column, and the sum of artificials is
//! minimized from the all-artificial basis. Bland's rule (lowest eligible
//! index for both the entering and leaving variable) rules out cycling.

/// Phase-1 optimum above this value certifies infeasibility.
pub const INFEASIBILITY_TOL: f64 = 1e-9;

const REDUCED_COST_TOL: f64 = 1e-11;
const PIVOT_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarSign {
    Free,
    NonNegative,
}

/// Outcome of a feasibility solve.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<f64>),
    /// Carries the phase-1 optimum (sum of artificials).
    Infeasible(f64),
}

/// Solves `rows · z >= 1`. Every row must have `signs.len()` entries.
pub fn margin_feasible(rows: &[Vec<f64>], signs: &[VarSign]) -> Feasibility {
    let n = signs.len();
    let r = rows.len();
    if r == 0 {
        return Feasibility::Feasible(vec![0.0; n]);
    }
    debug_assert!(rows.iter().all(|row| row.len() == n));

    // Column equilibration: coordinates of moment-curve points span many
    // orders of magnitude.
    let scale: Vec<f64> = (0..n)
        .map(|j| {
            let s = rows.iter().map(|row| row[j].abs()).fold(0.0, f64::max);
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();

    // Structural columns: (source coordinate, sign).
    let mut structural: Vec<(usize, f64)> = Vec::with_capacity(2 * n);
    for (j, s) in signs.iter().enumerate() {
        structural.push((j, 1.0));
        if *s == VarSign::Free {
            structural.push((j, -1.0));
        }
    }
    let ns = structural.len();
    let surplus0 = ns;
    let art0 = ns + r;
    let cols = ns + 2 * r;
    let rhs = cols;
    let width = cols + 1;

    let mut t = vec![0.0; r * width];
    for (i, row) in rows.iter().enumerate() {
        let line = &mut t[i * width..(i + 1) * width];
        for (c, &(j, sgn)) in structural.iter().enumerate() {
            line[c] = sgn * row[j] / scale[j];
        }
        line[surplus0 + i] = -1.0;
        line[art0 + i] = 1.0;
        line[rhs] = 1.0;
    }
    let mut basis: Vec<usize> = (art0..art0 + r).collect();

    // Reduced costs for cost 1 on artificials, with -objective in the rhs slot.
    let mut obj = vec![0.0; width];
    for i in 0..r {
        for c in 0..art0 {
            obj[c] -= t[i * width + c];
        }
        obj[rhs] -= t[i * width + rhs];
    }

    let mut pivots = 0;
    while let Some(enter) = (0..cols).find(|&c| obj[c] < -REDUCED_COST_TOL) {
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..r {
            let a = t[i * width + enter];
            if a > PIVOT_TOL {
                let ratio = t[i * width + rhs] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                        if ratio < lr && !tie || tie && basis[i] < basis[li] {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        // The phase-1 objective is bounded below by zero, so a column with no
        // positive entry can only come from round-off.
        let Some((pr, _)) = leave else {
            log::warn!("simplex: unbounded direction in phase 1, treating as optimal");
            break;
        };
        pivot(&mut t, &mut obj, width, r, pr, enter);
        basis[pr] = enter;
        pivots += 1;
        if pivots >= MAX_PIVOTS {
            log::warn!("simplex: pivot limit reached");
            break;
        }
    }

    let objective = -obj[rhs];
    if objective > INFEASIBILITY_TOL {
        return Feasibility::Infeasible(objective);
    }
    let mut z = vec![0.0; n];
    for (i, &b) in basis.iter().enumerate() {
        if b < ns {
            let (j, sgn) = structural[b];
            z[j] += sgn * t[i * width + rhs];
        }
    }
    for (zj, s) in z.iter_mut().zip(&scale) {
        *zj /= s;
    }
    Feasibility::Feasible(z)
}

fn pivot(t: &mut [f64], obj: &mut [f64], width: usize, r: usize, pr: usize, pc: usize) {
    let p = t[pr * width + pc];
    for v in &mut t[pr * width..(pr + 1) * width] {
        *v /= p;
    }
    let prow: Vec<f64> = t[pr * width..(pr + 1) * width].to_vec();
    for i in 0..r {
        if i == pr {
            continue;
        }
        let f = t[i * width + pc];
        if f != 0.0 {
            for (v, pv) in t[i * width..(i + 1) * width].iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            t[i * width + pc] = 0.0;
        }
    }
    let f = obj[pc];
    if f != 0.0 {
        for (v, pv) in obj.iter_mut().zip(&prow) {
            *v -= f * pv;
        }
        obj[pc] = 0.0;
    }
}
