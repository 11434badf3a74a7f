use crate::error::{Error, Result};

/// Cycle counts for a batch of multiplications through the two-stage
/// multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatencyRecord {
    pub stage1_cycles: u64,
    pub stage2_cycles: u64,
    /// Stages run back to back for every product.
    pub unpipelined_total: u64,
    /// Stage 1 of product `k + 1` overlaps stage 2 of product `k`.
    pub pipelined_total: u64,
    pub steady_state_interval: u64,
    /// `|stage1 - stage2|`; zero for even resolutions.
    pub imbalance: u64,
}

impl LatencyRecord {
    pub fn total_cycles(&self, pipelined: bool) -> u64 {
        if pipelined {
            self.pipelined_total
        } else {
            self.unpipelined_total
        }
    }
}

/// Stage-1 cycles at resolution `2^n`: the larger of the two inverse-count
/// products, `2^(2 * ceil(n/2))`.
pub fn stage1_cycles(resolution_log2: u32) -> u64 {
    1u64 << (2 * resolution_log2.div_ceil(2))
}

pub fn pipeline_model(num_multiplications: u64, resolution_log2: u32) -> Result<LatencyRecord> {
    if resolution_log2 > 30 {
        return Err(Error::param(format!(
            "resolution 2^{resolution_log2} is out of range for the latency model"
        )));
    }
    let s1 = stage1_cycles(resolution_log2);
    let s2 = 1u64 << resolution_log2;
    let overflow = || Error::param(format!("{num_multiplications} multiplications overflow the cycle count"));
    let unpipelined_total = num_multiplications.checked_mul(s1 + s2).ok_or_else(overflow)?;
    let interval = s1.max(s2);
    let pipelined_total = match num_multiplications {
        0 => 0,
        k => (k - 1)
            .checked_mul(interval)
            .and_then(|x| x.checked_add(s1 + s2))
            .ok_or_else(overflow)?,
    };
    Ok(LatencyRecord {
        stage1_cycles: s1,
        stage2_cycles: s2,
        unpipelined_total,
        pipelined_total,
        steady_state_interval: interval,
        imbalance: s1.abs_diff(s2),
    })
}
