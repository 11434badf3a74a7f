use rayon::prelude::*;

use super::{pct, with_workers, Domain, ReportTable, SweepOptions, MAE_DEFINITION};
use crate::error::{Error, Result};
use crate::method::{Method, Multiplier};
use crate::streams::{round_half_up, UnaryValue};

/// MAE when only the first `t` output bits are observed.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgressiveReport {
    pub method: Method,
    pub n: u32,
    pub domain: Domain,
    pub cases: u64,
    /// `(observe_bits, mae_pct)`.
    pub rows: Vec<(u64, f64)>,
    pub sources: String,
}

/// For each prefix length `t`, measures every case as `popcount_t / t` and
/// compares it with the optimal approximation at resolution `n`.
pub fn progressive_mae(
    method: Method,
    n: u32,
    observe_lengths: &[u64],
    options: &SweepOptions,
) -> Result<ProgressiveReport> {
    let len = 1u64 << n;
    if let Some(&t) = observe_lengths.iter().find(|&&t| t == 0 || t > len) {
        return Err(Error::param(format!("observe length {t} outside 1..={len}")));
    }
    let multiplier = Multiplier::new(method, n, 0)?;
    let top = options.domain.max_numerator(n);
    // Error of one case at prefix t, over the common denominator t * 2^n:
    // |popcount_t * 2^n - ideal * t|.
    let sums = with_workers(options.workers, || -> Result<Vec<u128>> {
        let rows: Result<Vec<Vec<u128>>> = (0..=top)
            .into_par_iter()
            .map(|a| {
                let mut acc = vec![0u128; observe_lengths.len()];
                let va = UnaryValue::new(a, n)?;
                for b in 0..=top {
                    let stream = multiplier.multiply_stream(va, UnaryValue::new(b, n)?)?;
                    let ideal = round_half_up((a * b) as u128, len as u128);
                    for (slot, &t) in acc.iter_mut().zip(observe_lengths) {
                        let observed = stream.prefix_popcount(t as usize) as u128 * len as u128;
                        *slot += observed.abs_diff(ideal * t as u128);
                    }
                }
                Ok(acc)
            })
            .collect();
        Ok(rows?.into_iter().fold(vec![0u128; observe_lengths.len()], |mut s, r| {
            for (x, y) in s.iter_mut().zip(r) {
                *x += y;
            }
            s
        }))
    })??;
    let cases = (top + 1) * (top + 1);
    let rows = observe_lengths
        .iter()
        .zip(sums)
        .map(|(&t, s)| (t, 100.0 * s as f64 / (cases as f64 * t as f64 * len as f64)))
        .collect();
    Ok(ProgressiveReport {
        method,
        n,
        domain: options.domain,
        cases,
        rows,
        sources: multiplier.describe(),
    })
}

/// `method,n,observe_bits,mae_pct`.
pub fn progressive_table(reports: &[ProgressiveReport]) -> ReportTable {
    let mut t = ReportTable::new(&["method", "n", "observe_bits", "mae_pct"]);
    t.comment("report", "progressive");
    t.comment("mae", MAE_DEFINITION);
    t.comment("measured", "popcount(first t bits)/t");
    if let Some(r) = reports.first() {
        t.comment("domain", r.domain);
    }
    for r in reports {
        t.comment(format!("sources[{},n={}]", r.method, r.n), &r.sources);
        for &(bits, mae) in &r.rows {
            t.push_row(vec![r.method.to_string(), r.n.to_string(), bits.to_string(), pct(mae)]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::sweep_multiply_mae;

    #[test]
    fn full_length_matches_sweep() {
        for m in Method::ALL {
            let opts = SweepOptions::default();
            let p = progressive_mae(m, 4, &[16], &opts).unwrap();
            let s = sweep_multiply_mae(m, 4, &opts).unwrap();
            assert_eq!(p.rows[0].1, s.mae_pct, "{m}");
        }
    }

    #[test]
    fn bad_lengths() {
        let opts = SweepOptions::default();
        assert!(progressive_mae(Method::Sobol, 4, &[0], &opts).is_err());
        assert!(progressive_mae(Method::Sobol, 4, &[17], &opts).is_err());
    }
}
