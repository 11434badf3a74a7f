//! Evaluation harness: exhaustive sweeps, progressive accuracy, function
//! error and matrix trials, plus report emission.
//!
//! Every aggregate is an integer sum merged in a fixed order, so reports do
//! not depend on the worker count.

mod functions;
mod matrix;
mod progressive;
mod report;
mod sweep;

pub use functions::{function_mae, function_table, FunctionReport};
pub use matrix::{matmul_error, matrix_table, matrix_trials, random_matrix, MatmulError, MatrixDims, MatrixReport, MatrixTrialConfig};
pub use progressive::{progressive_mae, progressive_table, ProgressiveReport};
pub use report::{emit_report, write_report, Output, ReportFormat, ReportTable};
pub use sweep::{sweep_multiply_mae, sweep_table, Domain, MaeReport, SweepOptions};

use crate::error::{Error, Result};

/// Runs `f` on a pool of `workers` threads, or the global pool for `None`.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::param("workers must be at least 1")),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::param(format!("cannot start {w} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Percentage with the fixed four decimals used in every report.
pub fn pct(x: f64) -> String {
    format!("{x:.4}")
}

/// MAE definition written into every report header.
pub const MAE_DEFINITION: &str = "100*mean(|measured-ideal|),values_in_[0,1]";
