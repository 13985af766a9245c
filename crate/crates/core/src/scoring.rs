use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, MedError, Result};
use crate::pointset::{dist, dot, norm};

/// Scoring function between an element embedding and a query.
///
/// All three are "larger is better"; the Euclidean score is the negated
/// distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scoring {
    #[default]
    Linear,
    Cosine,
    Euclidean,
}

impl Scoring {
    pub const ALL: [Scoring; 3] = [Scoring::Linear, Scoring::Cosine, Scoring::Euclidean];

    pub fn as_str(self) -> &'static str {
        match self {
            Scoring::Linear => "linear",
            Scoring::Cosine => "cos",
            Scoring::Euclidean => "l2",
        }
    }
}

impl fmt::Display for Scoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scoring {
    type Err = MedError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "inner" | "dot" => Ok(Scoring::Linear),
            "cos" | "cosine" => Ok(Scoring::Cosine),
            "l2" | "euclidean" => Ok(Scoring::Euclidean),
            other => Err(usage(format!(
                "unknown scoring {other:?} (expected linear, cos or l2)"
            ))),
        }
    }
}

/// `s(x, w)` for the chosen scoring.
pub fn score(s: Scoring, x: &[f64], w: &[f64]) -> Result<f64> {
    if x.len() != w.len() {
        return Err(usage(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            w.len()
        )));
    }
    match s {
        Scoring::Linear => Ok(dot(x, w)),
        Scoring::Cosine => {
            let (nx, nw) = (norm(x), norm(w));
            if nx == 0.0 || nw == 0.0 {
                return Err(domain("cosine score of a zero vector"));
            }
            Ok(dot(x, w) / (nx * nw))
        }
        Scoring::Euclidean => Ok(-dist(x, w)),
    }
}
