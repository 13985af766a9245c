use serde::Serialize;

use crate::error::{usage, Result};
use crate::scoring::Scoring;

/// Tight dimension bounds for k-shattering `m` points, independent of `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundsTable {
    pub lower: usize,
    pub upper: usize,
    pub scoring: Scoring,
    pub k: usize,
}

/// Lower bound `k-1` for every scoring; upper bound `2k` for linear and
/// Euclidean scoring, `2k+1` for cosine.
pub fn med_bounds(k: usize, scoring: Scoring) -> Result<BoundsTable> {
    if k < 2 {
        return Err(usage(format!("bounds are stated for k >= 2, got k={k}")));
    }
    let upper = match scoring {
        Scoring::Linear | Scoring::Euclidean => 2 * k,
        Scoring::Cosine => 2 * k + 1,
    };
    Ok(BoundsTable {
        lower: k - 1,
        upper,
        scoring,
        k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let b = med_bounds(2, Scoring::Linear).unwrap();
        assert_eq!((b.lower, b.upper), (1, 4));
        let b = med_bounds(2, Scoring::Cosine).unwrap();
        assert_eq!((b.lower, b.upper), (1, 5));
        let b = med_bounds(10, Scoring::Euclidean).unwrap();
        assert_eq!((b.lower, b.upper), (9, 20));
    }

    #[test]
    fn ordered_for_all_k() {
        for k in 2..=64 {
            for s in Scoring::ALL {
                let b = med_bounds(k, s).unwrap();
                assert!(b.lower <= b.upper);
            }
        }
        assert!(med_bounds(1, Scoring::Linear).is_err());
    }
}
