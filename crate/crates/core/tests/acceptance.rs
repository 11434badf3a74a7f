//! Acceptance gate. Each test prints one `criterion N: PASS|FAIL` line to the
//! real stdout (bypassing the harness capture) and then asserts.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use unaryflow::bench::{matrix_trials, progressive_mae, sweep_multiply_mae, Domain, MatrixTrialConfig, SweepOptions};
use unaryflow::costmodel::{estimate, ComponentCosts, Design};
use unaryflow::detmul::{clockdiv_multiply_exact, scalable_multiply, scalable_multiply_with, MulOptions};
use unaryflow::funcs::{Function, SeriesSpec};
use unaryflow::{Method, UnaryValue};

fn v(k: u64, n: u32) -> UnaryValue {
    UnaryValue::new(k, n).unwrap()
}

fn verdict(id: u32, pass: bool, detail: String) {
    let line = format!("criterion {id}: {} ({detail})\n", if pass { "PASS" } else { "FAIL" });
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(pass, "criterion {id}: {detail}");
}

fn rhu(num: u64, den: u64) -> u64 {
    (2 * num + den) / (2 * den)
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

#[test]
fn criterion_01_exact_multiplier() {
    let start = Instant::now();
    let mut mismatches = 0u64;
    let mut pairs = 0u64;
    for n in 0..=5 {
        let top = 1u64 << n;
        for a in 0..=top {
            for b in 0..=top {
                pairs += 1;
                if clockdiv_multiply_exact(v(a, n), v(b, n)).unwrap().popcount() != a * b {
                    mismatches += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches == 0 && elapsed < Duration::from_secs(1);
    verdict(1, pass, format!("{pairs} pairs up to 2^5, {mismatches} mismatches, {elapsed:.2?}"));
}

#[test]
fn criterion_02_error_bound() {
    let start = Instant::now();
    let mut worst = Vec::new();
    for n in [4u32, 6, 8] {
        let top = 1u64 << n;
        let mut max = 0u64;
        for a in 0..=top {
            for b in 0..=top {
                max = max.max(scalable_multiply(v(a, n), v(b, n)).unwrap().error_bits.unsigned_abs());
            }
        }
        worst.push(max);
    }
    let elapsed = start.elapsed();
    let pass = worst.iter().all(|&m| m <= 2) && elapsed < Duration::from_secs(30);
    verdict(2, pass, format!("max |error_bits| at n=4,6,8: {worst:?}, {elapsed:.2?}"));
}

#[test]
fn criterion_03_sweep_mae() {
    let targets = [(4u32, 0.93), (6, 0.34), (8, 0.16)];
    let mut pass = true;
    let mut got = Vec::new();
    for (n, target) in targets {
        let r = sweep_multiply_mae(Method::ScalableDeterministic, n, &SweepOptions::default()).unwrap();
        pass &= within(r.mae_pct, target, 0.30);
        got.push(format!("n={n} {:.4} vs {target}", r.mae_pct));
    }
    verdict(3, pass, format!("{}, tolerance 0.30", got.join(", ")));
}

#[test]
fn criterion_04_rare_worst_case() {
    let mut fractions = Vec::new();
    let mut inclusive = Vec::new();
    for n in [4u32, 6, 8] {
        let r = sweep_multiply_mae(Method::ScalableDeterministic, n, &SweepOptions::default()).unwrap();
        fractions.push(r.pct_with_error(2));
        let opts = SweepOptions { domain: Domain::Inclusive, ..SweepOptions::default() };
        inclusive.push(sweep_multiply_mae(Method::ScalableDeterministic, n, &opts).unwrap().pct_with_error(2));
    }
    let small = fractions[2] < 0.5;
    let decreasing = fractions.windows(2).all(|w| w[1] < w[0]);
    let fmt = |xs: &[f64]| xs.iter().map(|x| format!("{x:.4}%")).collect::<Vec<_>>().join(", ");
    verdict(
        4,
        small && decreasing,
        format!(
            "|error_bits|=2 share at n=4,6,8: {}; below 0.5% at n=8: {small}; decreasing: {decreasing}; inclusive domain: {}",
            fmt(&fractions),
            fmt(&inclusive)
        ),
    );
}

#[test]
fn criterion_05_three_term_oracle() {
    let mut mismatches = 0u64;
    let mut max_fourth = 0u64;
    for n in [4u32, 6] {
        let (keep_a, keep_b) = (n.div_ceil(2), n / 2);
        let (qa, qb) = (1u64 << keep_a, 1u64 << keep_b);
        let top = 1u64 << n;
        for a in 0..=top {
            for b in 0..=top {
                let (ah, al) = (a >> (n - keep_a), a & ((1 << (n - keep_a)) - 1));
                let (bh, bl) = (b >> (n - keep_b), b & ((1 << (n - keep_b)) - 1));
                let oracle = ah * bh + rhu(al * bh, qb) + rhu(bl * ah, qa);
                if scalable_multiply(v(a, n), v(b, n)).unwrap().value.numerator() != oracle {
                    mismatches += 1;
                }
                let opts = MulOptions { fourth_term: true, ..MulOptions::default() };
                let r = scalable_multiply_with(v(a, n), v(b, n), opts).unwrap();
                max_fourth = max_fourth.max(r.error_bits.unsigned_abs());
            }
        }
    }
    verdict(
        5,
        mismatches == 0 && max_fourth <= 1,
        format!("{mismatches} three-term mismatches at n=4,6; max |error_bits| with fourth term {max_fourth}"),
    );
}

#[test]
fn criterion_06_progressive_shape() {
    let lengths: Vec<u64> = (10..=16).collect();
    let published = [23.67, 18.45, 12.32, 8.61, 3.78, 1.52, 0.93];
    let opts = SweepOptions::default();
    let det = progressive_mae(Method::ScalableDeterministic, 4, &lengths, &opts).unwrap();
    let sobol = progressive_mae(Method::Sobol, 4, &lengths, &opts).unwrap();
    let d: Vec<f64> = det.rows.iter().map(|r| r.1).collect();
    let s: Vec<f64> = sobol.rows.iter().map(|r| r.1).collect();
    let mut misses = Vec::new();
    for (k, &t) in lengths.iter().enumerate() {
        let tol = if t == 16 { 0.3 } else { 3.0 };
        if !within(d[k], published[k], tol) {
            misses.push(format!("{t} bits {:.2} vs {}", d[k], published[k]));
        }
    }
    let mut order = Vec::new();
    for (k, &t) in lengths.iter().enumerate() {
        let sobol_wins = s[k] < d[k];
        let expect = match t {
            10 | 11 => Some(true),
            14..=16 => Some(false),
            _ => None,
        };
        if expect.is_some_and(|e| e != sobol_wins) {
            order.push(format!("{t} bits sobol {:.2} det {:.2}", s[k], d[k]));
        }
    }
    verdict(
        6,
        misses.is_empty() && order.is_empty(),
        format!(
            "det {:?}; off target: [{}]; crossover violations: [{}]",
            d.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>(),
            misses.join("; "),
            order.join("; ")
        ),
    );
}

#[test]
fn criterion_07_function_mae() {
    let mut pass = true;
    let mut got = Vec::new();
    for f in Function::ALL {
        let spec = SeriesSpec::default_for(f);
        let r = unaryflow::bench::function_mae(&spec, Method::ScalableDeterministic, 8, None).unwrap();
        pass &= r.mae_pct <= 2.5;
        got.push(format!("{} {:.4}", f.name(), r.mae_pct));
    }
    verdict(7, pass, format!("{} (limit 2.5)", got.join(", ")));
}

#[test]
fn criterion_08_matmul() {
    let config = MatrixTrialConfig::new(4, 1);
    let reports = matrix_trials(&config, &Method::ALL).unwrap();
    let det = reports.iter().find(|r| r.method == Method::ScalableDeterministic).unwrap().mae_pct;
    let below_all = reports
        .iter()
        .filter(|r| r.method != Method::ScalableDeterministic)
        .all(|r| det < r.mae_pct);
    let got: Vec<String> = reports.iter().map(|r| format!("{} {:.4}", r.method.name(), r.mae_pct)).collect();
    verdict(
        8,
        det <= 1.2 && below_all,
        format!("256x256*256x32, 20 trials, seed 1: {}", got.join(", ")),
    );
}

#[test]
fn criterion_09_cost_ordering() {
    let costs = ComponentCosts::default();
    let mut ordered = true;
    let mut sobol = Vec::new();
    let mut got = Vec::new();
    for n in [4u32, 6, 8] {
        let l = estimate(Design::Lfsr, n, &costs).unwrap();
        let d = estimate(Design::ScalableDeterministic, n, &costs).unwrap();
        let s = estimate(Design::Sobol, n, &costs).unwrap();
        ordered &= l.total < d.total && d.total < s.total;
        sobol.push(s.total);
        got.push(format!("n={n} lfsr {:.2}% det {:.2}%", l.relative_pct, d.relative_pct));
    }
    let superlinear = sobol[2] - sobol[1] > sobol[1] - sobol[0];
    verdict(
        9,
        ordered && superlinear,
        format!("{}; sobol totals {sobol:?}", got.join(", ")),
    );
}

fn cli_bytes(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_unaryflow")).args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}");
    out.stdout
}

#[test]
fn criterion_10_determinism_and_chaining() {
    let runs: [&[&str]; 3] = [
        &["sweep", "--method", "det", "lfsr", "sobol", "halton", "--n", "4", "6"],
        &["progressive", "--n", "4"],
        &["matmul", "--seed", "5", "--r1", "32", "--c1", "32", "--c2", "8", "--trials", "2"],
    ];
    let mut identical = true;
    for args in runs {
        let mut outputs = Vec::new();
        for workers in ["1", "1", "2", "7"] {
            let mut full = args.to_vec();
            full.extend(["--workers", workers]);
            outputs.push(cli_bytes(&full));
        }
        identical &= outputs.windows(2).all(|w| w[0] == w[1]);
    }
    let mut constant = true;
    for n in 1..=12u32 {
        let top = 1u64 << n;
        for (a, b) in [(0, 0), (1, top), (top, top), (top / 3, top - 1), (top / 2 + 1, top / 5)] {
            let r = scalable_multiply(v(a, n), v(b, n)).unwrap();
            let again = scalable_multiply(r.value, v(b, n)).unwrap();
            constant &= r.stream.len() as u64 == top && again.stream.len() as u64 == top;
        }
    }
    verdict(
        10,
        identical && constant,
        format!("byte-identical across runs and workers: {identical}; output length 2^n for n=1..12: {constant}"),
    );
}
