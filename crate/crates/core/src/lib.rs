//! Laboratory for the minimal embeddable dimension of top-k retrieval.
//!
//! * [`constructions`] builds explicit configurations (cyclic polytopes,
//!   sphere maps, ball witnesses, Gaussian sets).
//! * [`verifier`] decides k-shattering exactly by LP feasibility and
//!   k-centroid shattering by direct score comparison.
//! * [`optimizer`] runs the centroid-setting simulation.
//! * [`harness`] searches critical dimensions and sizes, fits the log-linear
//!   trend and persists results.
//!
//! Data-parallel loops run on rayon when the `parallel` feature (default) is
//! enabled; see [`par`].

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod harness;
pub mod lp;
pub mod optimizer;
pub mod par;
pub mod pointset;
pub mod scoring;
pub mod seed;
pub mod subsets;
pub mod verifier;

pub use bounds::{med_bounds, BoundsTable};
pub use error::{MedError, Result};
pub use par::Exec;
pub use pointset::{centroid, PointSet};
pub use scoring::{score, Scoring};
pub use subsets::{enumerate_subsets, enumerate_subsets_mode, SubsetMode, SubsetQuery};
pub use verifier::{
    separable_linear, verify_k_centroid_shatter, verify_k_shatter, ShatterReport, VerifyOptions,
};
