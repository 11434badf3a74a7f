//! Deterministic unary multiplication.
//!
//! [`clockdiv_multiply_exact`] pairs every bit of one thermometer operand
//! with every bit of the other and is exact, at the price of a `2^(2n)`-bit
//! output. [`scalable_multiply`] keeps the output at `2^n` bits: both operands
//! are right-shifted (downscaled) so that `|A'| * |B'| = 2^n`, multiplied by
//! clock division, and the discarded low bits are restored by flipping the
//! first 0 of each downscaled stream during some of its repetitions. How many
//! of those flips must land on a 1 of the other operand is itself a small
//! unary product (the stage-1 circuit), rounded half up.
//!
//! Cycle `t` of the output pairs bit `i = t mod qa` of `A'` with bit
//! `j = t / qa` of `B'`: `A'` cycles, `B'` is held for `qa` cycles.

mod pipeline;
mod trace;

pub use pipeline::{pipeline_model, LatencyRecord};
pub use trace::{trace_multiply, write_trace_csv, TraceRow};

use crate::error::{Error, Result};
use crate::streams::{round_half_up, BitStream, UnaryValue};

/// Exact clock-division product: `2^(2n)` cycles with bit
/// `a(t mod 2^n) AND b(t / 2^n)` over thermometer operands.
pub fn clockdiv_multiply_exact(a: UnaryValue, b: UnaryValue) -> Result<BitStream> {
    let n = same_resolution(a, b)?;
    if 2 * n > 40 {
        return Err(Error::param(format!(
            "exact product of 2^{n}-bit operands needs 2^{} cycles",
            2 * n
        )));
    }
    let len = 1usize << n;
    let (ak, bk) = (a.numerator() as usize, b.numerator() as usize);
    Ok(BitStream::from_fn(len * len, |t| t % len < ak && t / len < bk))
}

fn same_resolution(a: UnaryValue, b: UnaryValue) -> Result<u32> {
    if a.resolution_log2() != b.resolution_log2() {
        return Err(Error::param(format!(
            "operand resolutions differ: 2^{} vs 2^{}",
            a.resolution_log2(),
            b.resolution_log2()
        )));
    }
    Ok(a.resolution_log2())
}

/// A right-shifted operand and the remainder the shift discarded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DownscaleResult {
    pub quotient: UnaryValue,
    pub error: u64,
    pub shift: u32,
}

impl DownscaleResult {
    /// `quotient * 2^shift + error` at the original resolution.
    pub fn original(&self) -> UnaryValue {
        UnaryValue::new(
            (self.quotient.numerator() << self.shift) + self.error,
            self.quotient.resolution_log2() + self.shift,
        )
        .expect("recombined value stays within range")
    }
}

/// Right-shifts the operand register by `shift` bits (always rounds down).
pub fn downscale(x: UnaryValue, shift: u32) -> Result<DownscaleResult> {
    if shift > x.resolution_log2() {
        return Err(Error::param(format!(
            "cannot shift a 2^{}-resolution value by {shift}",
            x.resolution_log2()
        )));
    }
    let quotient = UnaryValue::new(x.numerator() >> shift, x.resolution_log2() - shift)?;
    Ok(DownscaleResult {
        quotient,
        error: x.numerator() & ((1u64 << shift) - 1),
        shift,
    })
}

/// Number of compensating flips that must coincide with a 1 of the other
/// operand: `round_half_up(error * other / q)`, where `q = 2^other.res`.
///
/// The product `error * other` is formed the way the stage-1 circuit forms
/// it, by an exact `q x q` clock-division multiply accumulated in a counter.
pub fn inv_count(error: u64, other_quotient: UnaryValue) -> Result<u64> {
    let res = other_quotient.resolution_log2();
    let q = 1u64 << res;
    if error >= q {
        return Err(Error::param(format!("error {error} must be below q = {q}")));
    }
    if error == 0 {
        return Ok(0);
    }
    let counter = clockdiv_multiply_exact(UnaryValue::new(error, res)?, other_quotient)?.popcount();
    Ok(round_half_up(counter as u128, q as u128) as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operand {
    /// The cycled operand (fast counter).
    A,
    /// The held operand (slow counter).
    B,
}

/// Where an operand's erroneous bit is inverted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipPlan {
    pub operand: Operand,
    /// Position of the first 0 of the downscaled thermometer code.
    pub erroneous_index: u64,
    /// Output cycles at which the erroneous bit is inverted, ascending.
    pub flip_cycles: Vec<u64>,
    /// Flips that coincide with a 1 of the other downscaled operand.
    pub aligned_count: u64,
    /// Flips that could not be placed because the only free 0-aligned cycle
    /// is the overlap cycle already claimed by operand A's plan.
    pub ceded: u64,
}

impl FlipPlan {
    fn empty(operand: Operand, erroneous_index: u64) -> Self {
        Self {
            operand,
            erroneous_index,
            flip_cycles: Vec::new(),
            aligned_count: 0,
            ceded: 0,
        }
    }
}

fn geometry(a: &DownscaleResult, b: &DownscaleResult) -> Result<(u64, u64)> {
    let (ra, rb) = (a.quotient.resolution_log2(), b.quotient.resolution_log2());
    if a.error >> rb != 0 || b.error >> ra != 0 {
        return Err(Error::param(format!(
            "remainders ({}, {}) do not fit a {}x{} schedule",
            a.error,
            b.error,
            1u64 << ra,
            1u64 << rb
        )));
    }
    Ok((1u64 << ra, 1u64 << rb))
}

fn plan_a(a: &DownscaleResult, b: &DownscaleResult) -> Result<FlipPlan> {
    let (qa, qb) = geometry(a, b)?;
    let ah = a.quotient.numerator();
    let bh = b.quotient.numerator();
    let mut plan = FlipPlan::empty(Operand::A, ah);
    if a.error == 0 {
        return Ok(plan);
    }
    let aligned = inv_count(a.error, b.quotient)?;
    let unaligned = a.error - aligned;
    debug_assert!(aligned <= bh && unaligned <= qb - bh);
    // Lowest-index 1-blocks of B', then highest-index 0-blocks.
    let blocks = (0..aligned).chain((qb - unaligned..qb).rev());
    plan.flip_cycles = blocks.map(|j| j * qa + ah).collect();
    plan.flip_cycles.sort_unstable();
    plan.aligned_count = aligned;
    Ok(plan)
}

fn plan_b(a: &DownscaleResult, b: &DownscaleResult) -> Result<FlipPlan> {
    let (qa, _) = geometry(a, b)?;
    let ah = a.quotient.numerator();
    let bh = b.quotient.numerator();
    let mut plan = FlipPlan::empty(Operand::B, bh);
    if b.error == 0 {
        return Ok(plan);
    }
    let aligned = inv_count(b.error, a.quotient)?;
    let mut unaligned = b.error - aligned;
    debug_assert!(aligned <= ah && unaligned <= qa - ah);
    let overlap = bh * qa + ah;
    let a_takes_overlap = plan_a(a, b)?.flip_cycles.binary_search(&overlap).is_ok();
    let mut cycles: Vec<u64> = (0..aligned).map(|i| bh * qa + i).collect();
    let mut i = qa;
    while unaligned > 0 && i > ah {
        i -= 1;
        let t = bh * qa + i;
        if t == overlap && a_takes_overlap {
            continue;
        }
        cycles.push(t);
        unaligned -= 1;
    }
    cycles.sort_unstable();
    plan.flip_cycles = cycles;
    plan.aligned_count = aligned;
    plan.ceded = unaligned;
    Ok(plan)
}

/// Flip plan for one operand of the schedule formed by `own` and `other`.
/// `which` says whether `own` is the cycled (A) or held (B) operand.
pub fn build_flip_plan(
    own: &DownscaleResult,
    other: &DownscaleResult,
    which: Operand,
) -> Result<FlipPlan> {
    match which {
        Operand::A => plan_a(own, other),
        Operand::B => plan_b(other, own),
    }
}

/// Split of an `n`-bit operand pair: A keeps `ceil(n/2)` bits, B `floor(n/2)`.
pub fn downscale_pair(a: UnaryValue, b: UnaryValue) -> Result<(DownscaleResult, DownscaleResult)> {
    let n = same_resolution(a, b)?;
    let keep_a = n.div_ceil(2);
    let keep_b = n / 2;
    Ok((downscale(a, n - keep_a)?, downscale(b, n - keep_b)?))
}

/// The representable value at `out_resolution_log2` nearest to `a * b`,
/// ties rounded up.
pub fn optimal_approximation(a: UnaryValue, b: UnaryValue, out_resolution_log2: u32) -> Result<UnaryValue> {
    let num = (a.numerator() as u128 * b.numerator() as u128) << out_resolution_log2;
    let den = 1u128 << (a.resolution_log2() + b.resolution_log2());
    UnaryValue::new(round_half_up(num, den) as u64, out_resolution_log2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MulOptions {
    /// Apply the compensating flips. Disabling them leaves the bare
    /// `A' x B'` product, which always under-approximates.
    pub compensate: bool,
    /// Also add the `A_L x B_L` remainder term, realized as extra 1s in the
    /// trailing zero cycles. Not part of the modeled datapath.
    pub fourth_term: bool,
}

impl Default for MulOptions {
    fn default() -> Self {
        Self {
            compensate: true,
            fourth_term: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulResult {
    pub stream: BitStream,
    pub value: UnaryValue,
    pub ideal: UnaryValue,
    /// `popcount - ideal numerator`.
    pub error_bits: i64,
    pub stage1_cycles: u64,
    pub stage2_cycles: u64,
    pub downscaled: [DownscaleResult; 2],
    pub plans: [FlipPlan; 2],
}

/// The constant-length multiplier: simulates the error-compensated
/// clock-division stage cycle by cycle for `2^n` output bits.
pub fn scalable_multiply(a: UnaryValue, b: UnaryValue) -> Result<MulResult> {
    scalable_multiply_with(a, b, MulOptions::default())
}

pub fn scalable_multiply_with(a: UnaryValue, b: UnaryValue, options: MulOptions) -> Result<MulResult> {
    let n = same_resolution(a, b)?;
    let (da, db) = downscale_pair(a, b)?;
    let (qa, qb) = geometry(&da, &db)?;
    let (plan_a, plan_b) = if options.compensate {
        (plan_a(&da, &db)?, plan_b(&da, &db)?)
    } else {
        (
            FlipPlan::empty(Operand::A, da.quotient.numerator()),
            FlipPlan::empty(Operand::B, db.quotient.numerator()),
        )
    };
    let len = 1usize << n;
    let mut flip_a = BitStream::zeros(len);
    for &t in &plan_a.flip_cycles {
        flip_a.set(t as usize, true);
    }
    let mut flip_b = BitStream::zeros(len);
    for &t in &plan_b.flip_cycles {
        flip_b.set(t as usize, true);
    }
    let (ah, bh) = (da.quotient.numerator(), db.quotient.numerator());
    let mut stream = BitStream::from_fn(len, |t| {
        let (i, j) = (t as u64 % qa, t as u64 / qa);
        let a_bit = (i < ah) ^ flip_a.get(t);
        let b_bit = (j < bh) ^ flip_b.get(t);
        a_bit && b_bit
    });
    if options.fourth_term {
        let mut extra = round_half_up(da.error as u128 * db.error as u128, 1u128 << n) as u64;
        for t in (0..len).rev() {
            if extra == 0 {
                break;
            }
            if !stream.get(t) {
                stream.set(t, true);
                extra -= 1;
            }
        }
        if extra > 0 {
            return Err(Error::param("fourth term overflows the output stream"));
        }
    }
    let value = stream.measure()?;
    let ideal = optimal_approximation(a, b, n)?;
    let error_bits = value.numerator() as i64 - ideal.numerator() as i64;
    let stage1_cycles = (qa * qa).max(qb * qb);
    Ok(MulResult {
        stream,
        value,
        ideal,
        error_bits,
        stage1_cycles,
        stage2_cycles: len as u64,
        downscaled: [da, db],
        plans: [plan_a, plan_b],
    })
}
