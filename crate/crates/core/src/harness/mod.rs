//! Critical-dimension and critical-size searches over the centroid
//! simulation, sweeps over universe sizes, log-linear fitting and the
//! published cubic baseline for comparison.

mod fit;
mod persist;
mod search;

pub use fit::{baseline_curve, fit_log_linear, fit_log_linear_points, FitResult};
pub use persist::{append_record, read_records, write_records, RESULTS_HEADER};
pub use search::{
    find_critical_dim, find_critical_m, probe, sweep, CriticalRecord, CriticalSizeRecord, Probe,
    SearchBudget, SizeTraceEntry, TraceEntry,
};
