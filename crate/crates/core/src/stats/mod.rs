//! Monte Carlo summaries: moments, bootstrap intervals, scans and fits.

pub mod accumulator;
pub mod bootstrap;
pub mod fit;
pub mod oracle;
pub mod regularity;
pub mod scan;
pub mod tail;

pub use accumulator::{accumulate, MomentAccumulator};
pub use bootstrap::{bootstrap_variance_ci, quantile, quantile_sorted, ConfidenceInterval};
pub use fit::{fit_log_bound, fit_log_points, BoundFit};
pub use oracle::cue_variance_oracle;
pub use regularity::{regularity_grid, regularity_sample};
pub use scan::{centered_spans, default_xi_grid, geometric_grid, variance_scan, Ensemble, Interval, ScanRow, ScanSpec};
pub use tail::{tail_bound, tail_check, wilson_interval, TailReport, TailRow, SECOND_MOMENT_BOUND};
