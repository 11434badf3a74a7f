//! C ABI for unaryflow.
//!
//! Objects are opaque handles created by `uf_*` constructors and released
//! with the matching `uf_*_free`. Every fallible call returns a
//! [`UfStatus`]; on failure the message is available from
//! [`uf_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use unaryflow::bench::{sweep_multiply_mae, Domain, MaeReport, SweepOptions};
use unaryflow::detmul::{clockdiv_multiply_exact, pipeline_model, scalable_multiply, MulResult};
use unaryflow::streams::{generate_stream, GeneratorKind, GeneratorSpec};
use unaryflow::{BitStream, Error, Method, UnaryValue};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UfStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    IoError = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UfGenerator {
    Counter = 0,
    Lfsr = 1,
    Sobol = 2,
    Halton = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UfMethod {
    Det = 0,
    Lfsr = 1,
    Sobol = 2,
    Halton = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UfDomain {
    /// Numerators `0..2^n-1`.
    Register = 0,
    /// Numerators `0..=2^n`.
    Inclusive = 1,
}

/// Cycle counts from the two-stage pipeline model.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UfLatency {
    pub stage1_cycles: u64,
    pub stage2_cycles: u64,
    pub unpipelined_total: u64,
    pub pipelined_total: u64,
    pub steady_state_interval: u64,
    pub imbalance: u64,
}

/// A bit stream.
pub struct UfStream(BitStream);

/// Result of one constant-length multiply.
pub struct UfMulResult {
    inner: MulResult,
    stream: UfStream,
}

/// Aggregate error of an exhaustive multiply sweep.
pub struct UfReport(MaeReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> UfStatus {
    match err {
        Error::Parameter(_) => UfStatus::InvalidArgument,
        Error::Parse { .. } => UfStatus::ParseError,
        Error::Io { .. } => UfStatus::IoError,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> UfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UfStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            let s = status_of(&e);
            set_error(e.to_string());
            s
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is null"));
            UfStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic".to_string());
            UfStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn uf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// NUL-terminated library version.
#[no_mangle]
pub extern "C" fn uf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Generates the `2^n`-bit stream for `numerator / 2^n`. `param` is the
/// LFSR seed, Sobol dimension or Halton base; 0 selects the default.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn uf_stream_generate(
    generator: UfGenerator,
    n: u32,
    numerator: u64,
    param: u64,
    out: *mut *mut UfStream,
) -> UfStatus {
    guard(|| {
        let spec = match generator {
            UfGenerator::Counter => GeneratorSpec::counter(n),
            UfGenerator::Lfsr if param == 0 => GeneratorSpec::default_for(GeneratorKind::Lfsr, n, 0)?,
            UfGenerator::Lfsr => GeneratorSpec::lfsr(n, param)?,
            UfGenerator::Sobol => GeneratorSpec::sobol(n, param as usize),
            UfGenerator::Halton => GeneratorSpec::halton(n, if param == 0 { 2 } else { param as u32 }),
        };
        let stream = generate_stream(UnaryValue::new(numerator, n)?, &spec)?;
        write_out(out, Box::into_raw(Box::new(UfStream(stream))), "out")
    })
}

/// Exact clock-division product, `2^(2n)` bits.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn uf_clockdiv_multiply(a: u64, b: u64, n: u32, out: *mut *mut UfStream) -> UfStatus {
    guard(|| {
        let s = clockdiv_multiply_exact(UnaryValue::new(a, n)?, UnaryValue::new(b, n)?)?;
        write_out(out, Box::into_raw(Box::new(UfStream(s))), "out")
    })
}

/// # Safety
/// `stream` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn uf_stream_free(stream: *mut UfStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

/// # Safety
/// `stream` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uf_stream_len(stream: *const UfStream, out: *mut usize) -> UfStatus {
    guard(|| write_out(out, deref(stream, "stream")?.0.len(), "out"))
}

/// # Safety
/// `stream` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uf_stream_popcount(stream: *const UfStream, out: *mut u64) -> UfStatus {
    guard(|| write_out(out, deref(stream, "stream")?.0.popcount(), "out"))
}

/// Bit `t` as 0 or 1.
///
/// # Safety
/// `stream` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uf_stream_bit(stream: *const UfStream, t: usize, out: *mut u8) -> UfStatus {
    guard(|| {
        let s = &deref(stream, "stream")?.0;
        if t >= s.len() {
            return Err(Failure::Lib(Error::Parameter(format!("bit {t} of a {}-bit stream", s.len()))));
        }
        write_out(out, s.get(t) as u8, "out")
    })
}

/// Writes the stream as a NUL-terminated `0`/`1` string when `capacity`
/// allows; `needed` always receives the required size including the NUL.
///
/// # Safety
/// `stream` must be a live handle; `buf` must hold `capacity` bytes or be
/// null with `capacity` 0; `needed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_stream_to_string(
    stream: *const UfStream,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> UfStatus {
    guard(|| {
        let text = deref(stream, "stream")?.0.to_string();
        write_out(needed, text.len() + 1, "needed")?;
        if capacity > text.len() {
            if buf.is_null() {
                return Err(Failure::Null("buf"));
            }
            ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
            buf.add(text.len()).write(0);
        }
        Ok(())
    })
}

/// Constant-length multiply of `a / 2^n` and `b / 2^n`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn uf_scalable_multiply(a: u64, b: u64, n: u32, out: *mut *mut UfMulResult) -> UfStatus {
    guard(|| {
        let inner = scalable_multiply(UnaryValue::new(a, n)?, UnaryValue::new(b, n)?)?;
        let stream = UfStream(inner.stream.clone());
        write_out(out, Box::into_raw(Box::new(UfMulResult { inner, stream })), "out")
    })
}

/// # Safety
/// `result` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn uf_mul_result_free(result: *mut UfMulResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Output numerator (popcount), ideal numerator and signed error in bits.
///
/// # Safety
/// `result` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_mul_result_value(
    result: *const UfMulResult,
    value: *mut u64,
    ideal: *mut u64,
    error_bits: *mut i64,
) -> UfStatus {
    guard(|| {
        let r = &deref(result, "result")?.inner;
        write_out(value, r.value.numerator(), "value")?;
        write_out(ideal, r.ideal.numerator(), "ideal")?;
        write_out(error_bits, r.error_bits, "error_bits")
    })
}

/// # Safety
/// `result` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_mul_result_cycles(
    result: *const UfMulResult,
    stage1: *mut u64,
    stage2: *mut u64,
) -> UfStatus {
    guard(|| {
        let r = &deref(result, "result")?.inner;
        write_out(stage1, r.stage1_cycles, "stage1")?;
        write_out(stage2, r.stage2_cycles, "stage2")
    })
}

/// The output stream, owned by `result`; null if `result` is null.
///
/// # Safety
/// `result` must be null or a live handle. The returned pointer must not be
/// freed and is invalid once `result` is freed.
#[no_mangle]
pub unsafe extern "C" fn uf_mul_result_stream(result: *const UfMulResult) -> *const UfStream {
    result.as_ref().map_or(ptr::null(), |r| &r.stream as *const UfStream)
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_pipeline_model(num_multiplies: u64, n: u32, out: *mut UfLatency) -> UfStatus {
    guard(|| {
        let l = pipeline_model(num_multiplies, n)?;
        write_out(
            out,
            UfLatency {
                stage1_cycles: l.stage1_cycles,
                stage2_cycles: l.stage2_cycles,
                unpipelined_total: l.unpipelined_total,
                pipelined_total: l.pipelined_total,
                steady_state_interval: l.steady_state_interval,
                imbalance: l.imbalance,
            },
            "out",
        )
    })
}

/// Exhaustive sweep of one method at `2^n`. `workers` 0 uses the default
/// thread pool; results do not depend on it.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn uf_sweep_mae(
    method: UfMethod,
    n: u32,
    domain: UfDomain,
    workers: u32,
    out: *mut *mut UfReport,
) -> UfStatus {
    guard(|| {
        let method = match method {
            UfMethod::Det => Method::ScalableDeterministic,
            UfMethod::Lfsr => Method::Lfsr,
            UfMethod::Sobol => Method::Sobol,
            UfMethod::Halton => Method::Halton,
        };
        let opts = SweepOptions {
            domain: match domain {
                UfDomain::Register => Domain::Register,
                UfDomain::Inclusive => Domain::Inclusive,
            },
            workers: (workers > 0).then_some(workers as usize),
        };
        let report = sweep_multiply_mae(method, n, &opts)?;
        write_out(out, Box::into_raw(Box::new(UfReport(report))), "out")
    })
}

/// # Safety
/// `report` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn uf_report_free(report: *mut UfReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_report_summary(report: *const UfReport, mae_pct: *mut f64, cases: *mut u64) -> UfStatus {
    guard(|| {
        let r = &deref(report, "report")?.0;
        write_out(mae_pct, r.mae_pct, "mae_pct")?;
        write_out(cases, r.cases, "cases")
    })
}

/// Number of cases whose `|error_bits|` equals `bits`.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uf_report_histogram(report: *const UfReport, bits: u64, out: *mut u64) -> UfStatus {
    guard(|| write_out(out, deref(report, "report")?.0.count_with_error(bits), "out"))
}
