pub mod check;
pub mod fit;
pub mod infinite;
pub mod scan;
pub mod spectrum;

use serde_json::{json, Value};

use crate::args::{CommonArgs, Format};
use crate::error::{CliError, CliResult};

/// Fills output defaults and sizes the global thread pool.
pub(crate) fn prepare(common: &mut CommonArgs) -> CliResult<Format> {
    let format = *common.format.get_or_insert(Format::Csv);
    let threads = *common
        .threads
        .get_or_insert_with(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    if threads == 0 {
        return Err(CliError::validation("--threads must be at least 1"));
    }
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(format)
}

/// Finite numbers as JSON numbers, anything else as null.
pub(crate) fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Inclusive grid from `lo` to `hi` with spacing `step`.
pub(crate) fn grid(lo: f64, hi: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0 && hi >= lo && lo > 0.0) {
        return Err(CliError::validation("spacing grid needs 0 < lo ≤ hi and step > 0"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut g: Vec<f64> = (0..=count).map(|i| lo + step * i as f64).collect();
    if hi - g[count] > 1e-12 {
        g.push(hi);
    }
    Ok(g)
}
