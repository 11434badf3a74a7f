use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{pct, with_workers, ReportTable, MAE_DEFINITION};
use crate::error::Result;
use crate::funcs::{SeriesEvaluator, SeriesSpec};
use crate::method::Method;
use crate::streams::UnaryValue;

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionReport {
    pub spec: SeriesSpec,
    pub method: Method,
    pub n: u32,
    pub cases: u64,
    pub abs_error_bits: u64,
    pub mae_pct: f64,
    pub histogram: BTreeMap<u64, u64>,
}

/// Reference: the real-valued function rounded half up to resolution `n`.
pub fn reference_numerator(spec: &SeriesSpec, x: UnaryValue) -> u64 {
    let scale = (1u64 << x.resolution_log2()) as f64;
    (spec.function.exact(x.to_f64()) * scale + 0.5).floor() as u64
}

/// Evaluates the series at every `x = k/2^n`, `k = 0..=2^n`.
pub fn function_mae(spec: &SeriesSpec, method: Method, n: u32, workers: Option<usize>) -> Result<FunctionReport> {
    let evaluator = SeriesEvaluator::new(spec, method, n)?;
    let top = 1u64 << n;
    let errors = with_workers(workers, || -> Result<Vec<u64>> {
        (0..=top)
            .into_par_iter()
            .map(|k| {
                let x = UnaryValue::new(k, n)?;
                let y = evaluator.eval(x)?;
                Ok(y.numerator().abs_diff(reference_numerator(spec, x)))
            })
            .collect()
    })??;
    let mut histogram = BTreeMap::new();
    for &e in &errors {
        *histogram.entry(e).or_default() += 1;
    }
    let abs_error_bits: u64 = errors.iter().sum();
    let cases = errors.len() as u64;
    Ok(FunctionReport {
        spec: spec.clone(),
        method,
        n,
        cases,
        abs_error_bits,
        mae_pct: 100.0 * abs_error_bits as f64 / (cases as f64 * top as f64),
        histogram,
    })
}

/// `function,method,n,degree,mae_pct`.
pub fn function_table(reports: &[FunctionReport]) -> ReportTable {
    let mut t = ReportTable::new(&["function", "method", "n", "degree", "mae_pct"]);
    t.comment("report", "functions");
    t.comment("mae", MAE_DEFINITION);
    t.comment("ideal", "round_half_up(f(x)*2^n)");
    let mut seen = Vec::new();
    for r in reports {
        if !seen.contains(&r.spec) {
            t.comment(format!("series[{}]", r.spec.function), r.spec.describe());
            seen.push(r.spec.clone());
        }
    }
    for r in reports {
        t.push_row(vec![
            r.spec.function.to_string(),
            r.method.to_string(),
            r.n.to_string(),
            r.spec.degree.to_string(),
            pct(r.mae_pct),
        ]);
    }
    t
}
