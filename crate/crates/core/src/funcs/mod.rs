//! Stream gates and series-based elementary functions.

mod series;

pub use series::{maclaurin_eval, Function, SeriesEvaluator, SeriesSpec, COEFFICIENT_RESOLUTION_LOG2};

use crate::error::Result;
use crate::streams::BitStream;

/// AND gate: `a * b` for independent streams, `min(a, b)` for aligned
/// thermometer streams.
pub fn and_multiply(sa: &BitStream, sb: &BitStream) -> Result<BitStream> {
    sa.and(sb)
}

/// 2:1 multiplexer: `s * a + (1 - s) * b` when the select stream is
/// independent of the data streams.
pub fn mux_scaled_add(sa: &BitStream, sb: &BitStream, sel: &BitStream) -> Result<BitStream> {
    BitStream::select(sel, sa, sb)
}

/// NAND gate: `1 - a * b` for independent streams.
pub fn nand_stage(sa: &BitStream, sb: &BitStream) -> Result<BitStream> {
    Ok(sa.and(sb)?.not())
}

/// `0101...`: a select stream of value 1/2 that picks `sb` on even cycles.
/// Against a thermometer `sb` with `k` ones it keeps `ceil(k / 2)` of them.
pub fn half_select(len: usize) -> BitStream {
    BitStream::from_fn(len, |t| t % 2 == 1)
}
