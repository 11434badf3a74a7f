use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use unaryflow_ffi::*;

fn last_error() -> String {
    let p = uf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn counter_stream_round_trip() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(uf_stream_generate(UfGenerator::Counter, 4, 12, 0, &mut s), UfStatus::Ok);
        let mut len = 0;
        let mut pc = 0;
        assert_eq!(uf_stream_len(s, &mut len), UfStatus::Ok);
        assert_eq!(uf_stream_popcount(s, &mut pc), UfStatus::Ok);
        assert_eq!((len, pc), (16, 12));
        let mut needed = 0;
        assert_eq!(uf_stream_to_string(s, ptr::null_mut(), 0, &mut needed), UfStatus::Ok);
        assert_eq!(needed, 17);
        let mut buf = vec![0 as std::ffi::c_char; needed];
        assert_eq!(uf_stream_to_string(s, buf.as_mut_ptr(), buf.len(), &mut needed), UfStatus::Ok);
        let text = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert_eq!(text, "1111111111110000");
        let mut bit = 9;
        assert_eq!(uf_stream_bit(s, 12, &mut bit), UfStatus::Ok);
        assert_eq!(bit, 0);
        assert_eq!(uf_stream_bit(s, 16, &mut bit), UfStatus::InvalidArgument);
        uf_stream_free(s);
    }
}

#[test]
fn worked_multiply() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(uf_scalable_multiply(5, 15, 4, &mut r), UfStatus::Ok);
        let (mut v, mut ideal, mut err) = (0, 0, 9);
        assert_eq!(uf_mul_result_value(r, &mut v, &mut ideal, &mut err), UfStatus::Ok);
        assert_eq!((v, ideal, err), (5, 5, 0));
        let (mut s1, mut s2) = (0, 0);
        assert_eq!(uf_mul_result_cycles(r, &mut s1, &mut s2), UfStatus::Ok);
        assert_eq!((s1, s2), (16, 16));
        let stream = uf_mul_result_stream(r);
        let mut len = 0;
        assert_eq!(uf_stream_len(stream, &mut len), UfStatus::Ok);
        assert_eq!(len, 16);
        uf_mul_result_free(r);
    }
}

#[test]
fn clockdiv_is_exact() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(uf_clockdiv_multiply(3, 1, 2, &mut s), UfStatus::Ok);
        let mut pc = 0;
        uf_stream_popcount(s, &mut pc);
        assert_eq!(pc, 3);
        uf_stream_free(s);
    }
}

#[test]
fn errors_carry_messages() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(uf_stream_generate(UfGenerator::Counter, 4, 17, 0, &mut s), UfStatus::InvalidArgument);
        assert!(s.is_null());
        assert!(last_error().contains("17"));
        assert_eq!(uf_stream_popcount(ptr::null(), ptr::null_mut()), UfStatus::NullPointer);
        assert!(last_error().contains("stream"));
        assert_eq!(uf_scalable_multiply(1, 1, 4, ptr::null_mut()), UfStatus::NullPointer);
        uf_stream_free(ptr::null_mut());
        uf_mul_result_free(ptr::null_mut());
        uf_report_free(ptr::null_mut());
    }
}

#[test]
fn sweep_report() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(uf_sweep_mae(UfMethod::Det, 4, UfDomain::Register, 2, &mut r), UfStatus::Ok);
        let (mut mae, mut cases) = (0.0, 0);
        assert_eq!(uf_report_summary(r, &mut mae, &mut cases), UfStatus::Ok);
        assert_eq!(cases, 256);
        assert!((mae - 0.9277).abs() < 1e-4);
        let mut two = 9;
        assert_eq!(uf_report_histogram(r, 2, &mut two), UfStatus::Ok);
        assert_eq!(two, 0);
        uf_report_free(r);
    }
}

#[test]
fn pipeline() {
    let mut l = UfLatency::default();
    assert_eq!(unsafe { uf_pipeline_model(100, 4, &mut l) }, UfStatus::Ok);
    assert_eq!(l.pipelined_total, 101 * 16);
    assert_eq!(l.steady_state_interval, 16);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(uf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/unaryflow.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["uf_scalable_multiply", "uf_sweep_mae", "uf_last_error_message", "UF_STATUS_OK"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let probe = std::env::temp_dir().join(format!("unaryflow_probe_{}.c", std::process::id()));
    std::fs::write(&probe, "#include \"unaryflow.h\"\nint main(void) { return UF_STATUS_OK; }\n").unwrap();
    let status = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&probe)
        .status();
    let _ = std::fs::remove_file(&probe);
    match status {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(e) => eprintln!("no C compiler available ({e}); header syntax not checked"),
    }
}
