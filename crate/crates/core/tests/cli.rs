use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn unaryflow(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unaryflow"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn unaryflow")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn run_ok(dir: &Path, args: &[&str]) -> String {
    let out = unaryflow(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn mul_prints_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(dir.path(), &["mul", "--n", "4", "--a", "5", "--b", "15"]);
    assert_eq!(out.lines().next(), Some("5/16"));
    assert!(out.contains("error_bits 0"));
    let trace = run_ok(dir.path(), &["mul", "--n", "4", "--a", "5", "--b", "15", "--trace"]);
    assert!(trace.contains("cycle,i,j,a_bit,b_bit,flip_a,flip_b,out_bit"));
}

#[test]
fn gen_zero_value_is_all_zeros() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["counter", "lfsr", "sobol", "halton"] {
        let out = run_ok(dir.path(), &["gen", "--kind", kind, "--n", "4", "--value", "0"]);
        assert_eq!(out.trim(), "0".repeat(16), "{kind}");
    }
    let out = run_ok(dir.path(), &["gen", "--kind", "counter", "--n", "4", "--value", "12"]);
    assert_eq!(out.trim(), "1111111111110000");
}

#[test]
fn sweep_row_for_det_at_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(dir.path(), &["sweep", "--n", "4"]);
    let rows = data_rows(&out);
    assert_eq!(rows, ["det,4,0.9277,218,38,0,256"]);
    assert!(out.contains("# mae="));
}

#[test]
fn help_and_usage_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["gen", "mul", "sweep", "progressive", "funcs", "matmul", "cost"] {
        let out = unaryflow(dir.path(), &[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
        assert!(stdout(&out).contains("Usage"));
    }
    assert_eq!(unaryflow(dir.path(), &["sweep", "--frob"]).status.code(), Some(2));
    assert_eq!(unaryflow(dir.path(), &["bogus"]).status.code(), Some(2));
    assert_eq!(unaryflow(dir.path(), &["matmul", "--n", "4"]).status.code(), Some(2));
    let bad = unaryflow(dir.path(), &["mul", "--n", "4", "--a", "17", "--b", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("unaryflow: "));
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("unaryflow.conf"), "# defaults\nformat = csv\nsweep.n = 6\nsweep.method = det sobol\n").unwrap();
    let cfg = run_ok(dir.path(), &["sweep", "--show-config"]);
    assert!(cfg.lines().any(|l| l == "n=6"), "{cfg}");
    assert!(cfg.lines().any(|l| l == "method=det sobol"), "{cfg}");
    let out = run_ok(dir.path(), &["sweep"]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("det,6,") && rows[1].starts_with("sobol,6,"));
    let out = run_ok(dir.path(), &["sweep", "--n", "4", "--method", "det"]);
    assert_eq!(data_rows(&out), ["det,4,0.9277,218,38,0,256"]);

    let other = dir.path().join("other.conf");
    std::fs::write(&other, "sweep.frob = 1\n").unwrap();
    let out = unaryflow(dir.path(), &["--config", other.to_str().unwrap(), "sweep"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--frob"));
}

#[test]
fn output_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cost.csv");
    let printed = run_ok(dir.path(), &["cost", "--out", path.to_str().unwrap()]);
    assert!(printed.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(data_rows(&csv).len(), 4 * 3);
    let text = run_ok(dir.path(), &["sweep", "--n", "4", "--format", "text"]);
    let last = text.lines().last().unwrap();
    assert_eq!(last.split_whitespace().collect::<Vec<_>>(), ["det", "4", "0.9277", "218", "38", "0", "256"]);
}

fn sha(path: &Path) -> Vec<u8> {
    Sha256::digest(std::fs::read(path).unwrap()).to_vec()
}

#[test]
fn reports_are_byte_identical_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["sweep", "--method", "det", "lfsr", "sobol", "halton", "--n", "4", "6"],
        &["progressive", "--n", "4"],
        &["funcs", "--method", "det", "sobol"],
        &["matmul", "--seed", "3", "--r1", "16", "--c1", "16", "--c2", "8", "--trials", "3"],
    ];
    for (c, args) in cases.iter().enumerate() {
        let mut hashes = Vec::new();
        for (r, workers) in ["1", "1", "3", "8"].iter().enumerate() {
            let path = dir.path().join(format!("{c}-{r}.csv"));
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--workers", workers, "--out", path.to_str().unwrap()]);
            run_ok(dir.path(), &full);
            hashes.push(sha(&path));
        }
        assert!(hashes.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}

#[test]
fn matmul_from_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.txt"), "2 2 4\n16 0\n0 16\n").unwrap();
    std::fs::write(dir.path().join("b.txt"), "2 1 4\n8\n4\n+\n-\n").unwrap();
    let out = run_ok(dir.path(), &["matmul", "--n", "4", "--a", "a.txt", "--b", "b.txt", "--method", "det"]);
    assert!(out.contains("0.5") && out.contains("-0.25"), "{out}");
}
