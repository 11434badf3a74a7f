use std::fs::File;
use std::io::Write;

use super::{Command, CostArgs, FuncsArgs, GenArgs, MatmulArgs, MulArgs, OutputArgs, ProgressiveArgs, SweepArgs};
use crate::bench::{
    emit_report, function_mae, function_table, matrix_table, matrix_trials, progressive_mae, progressive_table,
    sweep_multiply_mae, sweep_table, with_workers, MatrixDims, MatrixTrialConfig, Output, ReportTable, SweepOptions,
};
use crate::costmodel::{calibrate, cost_table, function_cost, ComponentCosts, TABLE_TARGETS};
use crate::detmul::{optimal_approximation, scalable_multiply, trace_multiply, write_trace_csv};
use crate::error::{Error, Result};
use crate::funcs::SeriesSpec;
use crate::matrix::{read_matrix, write_result_csv, Engine, EngineConfig};
use crate::method::{Method, Multiplier};
use crate::streams::{generate_stream, lfsr, GeneratorKind, GeneratorSpec, Source, UnaryValue};

pub(super) fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Gen(a) => &a.output,
        Command::Mul(a) => &a.output,
        Command::Sweep(a) => &a.output,
        Command::Progressive(a) => &a.output,
        Command::Funcs(a) => &a.output,
        Command::Matmul(a) => &a.output,
        Command::Cost(a) => &a.output,
    }
}

pub(super) fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Mul(a) => mul(a),
        Command::Sweep(a) => sweep(a),
        Command::Progressive(a) => progressive(a),
        Command::Funcs(a) => funcs(a),
        Command::Matmul(a) => matmul(a),
        Command::Cost(a) => cost(a),
    }
}

fn write_with(output: &Output, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    match output {
        Output::Stdout => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock).and_then(|_| lock.flush()).map_err(|e| Error::io("<stdout>", e))
        }
        Output::Path(path) => {
            let mut file = std::io::BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
            body(&mut file).and_then(|_| file.flush()).map_err(|e| Error::io(path, e))
        }
    }
}

fn emit(table: &ReportTable, output: &OutputArgs) -> Result<()> {
    emit_report(table, output.report_format(), &output.out)
}

fn gen(a: &GenArgs) -> Result<()> {
    let n = a.n;
    let spec = match a.kind {
        GeneratorKind::UnaryCounter => GeneratorSpec::counter(n),
        GeneratorKind::Lfsr => {
            let mut spec = GeneratorSpec::lfsr(n, a.seed)?;
            if let (Some(poly), Source::Lfsr { polynomial, .. }) = (a.poly, &mut spec.source) {
                *polynomial = poly;
            }
            spec
        }
        GeneratorKind::Sobol => GeneratorSpec::sobol(n, a.dimension),
        GeneratorKind::Halton => GeneratorSpec::halton(n, a.base),
    };
    if let Source::Lfsr { polynomial, .. } = spec.source {
        if !lfsr::is_maximal(polynomial, n)? {
            eprintln!("unaryflow: warning: LFSR polynomial {polynomial:#x} is not maximal for width {n}");
        }
    }
    let stream = generate_stream(UnaryValue::new(a.value, n)?, &spec)?;
    write_with(&a.output.out, |w| writeln!(w, "{stream}"))
}

fn mul(a: &MulArgs) -> Result<()> {
    let (x, y) = (UnaryValue::new(a.a, a.n)?, UnaryValue::new(a.b, a.n)?);
    if a.trace {
        if a.method != Method::ScalableDeterministic {
            return Err(Error::param("--trace is only available for the det method"));
        }
        let rows = trace_multiply(x, y)?;
        return write_with(&a.output.out, |w| write_trace_csv(&rows, w));
    }
    let mut lines = Vec::new();
    if a.method == Method::ScalableDeterministic {
        let r = scalable_multiply(x, y)?;
        lines.push(r.value.to_string());
        lines.push(format!("ideal {}", r.ideal));
        lines.push(format!("error_bits {}", r.error_bits));
        lines.push(format!("stage1_cycles {}", r.stage1_cycles));
        lines.push(format!("stage2_cycles {}", r.stage2_cycles));
    } else {
        let m = Multiplier::new(a.method, a.n, 0)?;
        let value = m.multiply(x, y)?;
        let ideal = optimal_approximation(x, y, a.n)?;
        lines.push(value.to_string());
        lines.push(format!("ideal {ideal}"));
        lines.push(format!("error_bits {}", value.numerator() as i64 - ideal.numerator() as i64));
        lines.push(format!("sources {}", m.describe()));
    }
    write_with(&a.output.out, |w| {
        for l in &lines {
            writeln!(w, "{l}")?;
        }
        Ok(())
    })
}

fn warn_large(n: u32) {
    if n > 8 {
        eprintln!("unaryflow: warning: n = {n} sweeps (2^{n}+1)^2 pairs and may take a long time");
    }
}

fn sweep(a: &SweepArgs) -> Result<()> {
    let opts = SweepOptions {
        domain: a.domain,
        workers: a.workers,
    };
    let mut reports = Vec::new();
    for &method in &a.method {
        for &n in &a.n {
            warn_large(n);
            reports.push(sweep_multiply_mae(method, n, &opts)?);
        }
    }
    emit(&sweep_table(&reports), &a.output)
}

/// `10..=16` scaled to a `2^n`-bit stream.
fn default_observe(n: u32) -> Vec<u64> {
    (10..=16u64)
        .map(|t| if n >= 4 { t << (n - 4) } else { (t >> (4 - n)).max(1) })
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn progressive(a: &ProgressiveArgs) -> Result<()> {
    warn_large(a.n);
    let observe = if a.observe.is_empty() { default_observe(a.n) } else { a.observe.clone() };
    let opts = SweepOptions {
        domain: a.domain,
        workers: a.workers,
    };
    let reports = a
        .method
        .iter()
        .map(|&m| progressive_mae(m, a.n, &observe, &opts))
        .collect::<Result<Vec<_>>>()?;
    emit(&progressive_table(&reports), &a.output)
}

fn funcs(a: &FuncsArgs) -> Result<()> {
    let specs = match &a.spec_file {
        Some(path) => SeriesSpec::load_config(path)?,
        None => Vec::new(),
    };
    let mut reports = Vec::new();
    for &f in &a.function {
        let spec = match specs.iter().find(|s| s.function == f) {
            Some(s) => s.clone(),
            None if a.spec_file.is_some() => {
                return Err(Error::param(format!("{f} is not defined in --spec-file")));
            }
            None => SeriesSpec::default_for(f),
        };
        for &m in &a.method {
            reports.push(function_mae(&spec, m, a.n, a.workers)?);
        }
    }
    emit(&function_table(&reports), &a.output)
}

fn matmul(a: &MatmulArgs) -> Result<()> {
    if let (Some(pa), Some(pb)) = (&a.a, &a.b) {
        let left = read_matrix(pa)?.magnitudes().clone();
        let right = read_matrix(pb)?.into_weights();
        let &[method] = a.method.as_slice() else {
            return Err(Error::param("a single --method is needed to multiply matrix files"));
        };
        let engine = Engine::new(EngineConfig::new(method, left.resolution_log2()))?;
        let result = with_workers(a.workers, || engine.matmul(&left, &right))??;
        return write_with(&a.output.out, |w| write_result_csv(&result, w));
    }
    let seed = a.seed.ok_or_else(|| Error::param("--seed is required for random trials"))?;
    let config = MatrixTrialConfig {
        dims: MatrixDims {
            r1: a.r1,
            c1: a.c1,
            c2: a.c2,
        },
        n: a.n,
        trials: a.trials,
        seed,
        domain: a.domain,
        workers: a.workers,
    };
    let reports = matrix_trials(&config, &a.method)?;
    emit(&matrix_table(&reports, &config), &a.output)
}

fn cost(a: &CostArgs) -> Result<()> {
    let costs = match &a.costs {
        Some(p) => ComponentCosts::load(p)?,
        None => ComponentCosts::default(),
    };
    let costs = if a.calibrate {
        let cal = calibrate(&TABLE_TARGETS, &costs)?;
        for (t, fitted) in &cal.fitted {
            eprintln!(
                "calibration {} n={}: target {:.2} fitted {:.2} residual {:+.2}",
                t.design,
                t.n,
                t.relative_pct,
                fitted,
                fitted - t.relative_pct
            );
        }
        eprintln!("calibration rms residual {:.4}", cal.rms_residual);
        cal.costs
    } else {
        costs
    };
    let rows = match a.function {
        None => cost_table(&a.design, &a.n, &costs)?,
        Some(f) => {
            let spec = SeriesSpec::default_for(f);
            let mut rows = Vec::new();
            for &d in &a.design {
                for &n in &a.n {
                    rows.push(function_cost(d, &spec, n, &costs)?);
                }
            }
            rows
        }
    };
    let mut t = ReportTable::new(&["design", "n", "total_nand", "relative_pct"]);
    t.comment("report", "cost");
    t.comment("unit_costs", costs.describe());
    if let Some(f) = a.function {
        t.comment("series", SeriesSpec::default_for(f).describe());
    }
    for r in &rows {
        t.push_row(vec![
            r.design.to_string(),
            r.n.to_string(),
            format!("{:.4}", r.total),
            format!("{:.4}", r.relative_pct),
        ]);
    }
    emit(&t, &a.output)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observe_defaults() {
        assert_eq!(default_observe(4), (10..=16).collect::<Vec<_>>());
        assert_eq!(default_observe(5)[0], 20);
    }
}
