use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{pct, with_workers, ReportTable, MAE_DEFINITION};
use crate::error::{Error, Result};
use crate::method::{Method, Multiplier, ProductTable};
use crate::streams::{round_half_even, round_half_up};

/// Which operand numerators a sweep covers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Domain {
    /// `0..2^n`: every value an n-bit register holds.
    #[default]
    Register,
    /// `0..=2^n`: also the saturated value 1.
    Inclusive,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Register => "register",
            Domain::Inclusive => "inclusive",
        }
    }

    /// Largest numerator in the domain.
    pub fn max_numerator(self, n: u32) -> u64 {
        match self {
            Domain::Register => (1u64 << n) - 1,
            Domain::Inclusive => 1u64 << n,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Domain::Register => Domain::Inclusive,
            Domain::Inclusive => Domain::Register,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "register" => Ok(Domain::Register),
            "inclusive" => Ok(Domain::Inclusive),
            other => Err(Error::param(format!("unknown domain '{other}' (register or inclusive)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepOptions {
    pub domain: Domain,
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Tally {
    cases: u64,
    abs_bits: u128,
    abs_bits_even: u128,
    histogram: BTreeMap<u64, u64>,
    exact_cases: u64,
    exact_abs_bits: u128,
}

impl Tally {
    fn record(&mut self, observed: u64, ideal: u64, ideal_even: u64, exact: bool) {
        let e = observed.abs_diff(ideal);
        self.cases += 1;
        self.abs_bits += e as u128;
        self.abs_bits_even += observed.abs_diff(ideal_even) as u128;
        *self.histogram.entry(e).or_default() += 1;
        if exact {
            self.exact_cases += 1;
            self.exact_abs_bits += e as u128;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.cases += other.cases;
        self.abs_bits += other.abs_bits;
        self.abs_bits_even += other.abs_bits_even;
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self.exact_cases += other.exact_cases;
        self.exact_abs_bits += other.exact_abs_bits;
        self
    }
}

fn mae_pct(abs_bits: u128, cases: u64, n: u32) -> f64 {
    if cases == 0 {
        return 0.0;
    }
    100.0 * abs_bits as f64 / (cases as f64 * (1u64 << n) as f64)
}

/// Aggregate error of one method over every operand pair of a domain.
#[derive(Clone, Debug, PartialEq)]
pub struct MaeReport {
    pub method: Method,
    pub n: u32,
    pub domain: Domain,
    pub cases: u64,
    /// `sum |observed - ideal|` in output bits.
    pub abs_error_bits: u128,
    pub mae_pct: f64,
    /// `|error_bits|` to case count.
    pub histogram: BTreeMap<u64, u64>,
    /// Pairs whose product is exactly representable, and their error.
    pub exact_cases: u64,
    pub exact_abs_error_bits: u128,
    /// Same sweep over the other domain.
    pub other_domain_mae_pct: f64,
    /// Ideal rounded half to even instead of half up.
    pub ties_even_mae_pct: f64,
    pub sources: String,
}

impl MaeReport {
    pub fn max_abs_error_bits(&self) -> u64 {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    pub fn count_with_error(&self, bits: u64) -> u64 {
        self.histogram.get(&bits).copied().unwrap_or(0)
    }

    /// Percentage of cases whose error is exactly `bits`.
    pub fn pct_with_error(&self, bits: u64) -> f64 {
        100.0 * self.count_with_error(bits) as f64 / self.cases.max(1) as f64
    }

    pub fn histogram_string(&self) -> String {
        self.histogram
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Runs the method's multiplier on every operand pair and compares each
/// `2^n`-bit output with the optimal approximation of the product.
pub fn sweep_multiply_mae(method: Method, n: u32, options: &SweepOptions) -> Result<MaeReport> {
    if n == 0 || n > ProductTable::MAX_RESOLUTION_LOG2 {
        return Err(Error::param(format!("sweep resolution n = {n} is out of range")));
    }
    let multiplier = Multiplier::new(method, n, 0)?;
    let (reg, inc) = with_workers(options.workers, || -> Result<(Tally, Tally)> {
        let table = ProductTable::build(&multiplier)?;
        let top = 1u64 << n;
        let den = 1u128 << n;
        let rows: Vec<(Tally, Tally)> = (0..=top)
            .into_par_iter()
            .map(|a| {
                let mut reg = Tally::default();
                let mut inc = Tally::default();
                for b in 0..=top {
                    let prod = (a * b) as u128;
                    let ideal = round_half_up(prod, den) as u64;
                    let ideal_even = round_half_even(prod, den) as u64;
                    let exact = prod.is_multiple_of(den);
                    let observed = table.get(a, b);
                    inc.record(observed, ideal, ideal_even, exact);
                    if a < top && b < top {
                        reg.record(observed, ideal, ideal_even, exact);
                    }
                }
                (reg, inc)
            })
            .collect();
        Ok(rows
            .into_iter()
            .fold((Tally::default(), Tally::default()), |(r, i), (r2, i2)| (r.merge(r2), i.merge(i2))))
    })??;
    let (main, other) = match options.domain {
        Domain::Register => (reg, inc),
        Domain::Inclusive => (inc, reg),
    };
    Ok(MaeReport {
        method,
        n,
        domain: options.domain,
        cases: main.cases,
        abs_error_bits: main.abs_bits,
        mae_pct: mae_pct(main.abs_bits, main.cases, n),
        histogram: main.histogram,
        exact_cases: main.exact_cases,
        exact_abs_error_bits: main.exact_abs_bits,
        other_domain_mae_pct: mae_pct(other.abs_bits, other.cases, n),
        ties_even_mae_pct: mae_pct(main.abs_bits_even, main.cases, n),
        sources: multiplier.describe(),
    })
}

/// `method,n,mae_pct,err0,err1,err2,cases` with the sensitivity figures as
/// comments.
pub fn sweep_table(reports: &[MaeReport]) -> ReportTable {
    let mut t = ReportTable::new(&["method", "n", "mae_pct", "err0", "err1", "err2", "cases"]);
    t.comment("report", "sweep");
    t.comment("mae", MAE_DEFINITION);
    t.comment("ideal", "round_half_up(a*b/2^n)");
    if let Some(r) = reports.first() {
        t.comment("domain", r.domain);
    }
    for r in reports {
        let key = format!("{},n={}", r.method, r.n);
        t.comment(format!("sources[{key}]"), &r.sources);
        t.comment(format!("histogram[{key}]"), r.histogram_string());
        t.comment(format!("err2_pct[{key}]"), pct(r.pct_with_error(2)));
        t.comment(format!("mae_pct_{}[{key}]", r.domain.other()), pct(r.other_domain_mae_pct));
        t.comment(format!("mae_pct_ties_even[{key}]"), pct(r.ties_even_mae_pct));
        t.push_row(vec![
            r.method.to_string(),
            r.n.to_string(),
            pct(r.mae_pct),
            r.count_with_error(0).to_string(),
            r.count_with_error(1).to_string(),
            r.count_with_error(2).to_string(),
            r.cases.to_string(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_sums_to_cases() {
        for m in Method::ALL {
            let r = sweep_multiply_mae(m, 4, &SweepOptions::default()).unwrap();
            assert_eq!(r.histogram.values().sum::<u64>(), r.cases);
            assert_eq!(r.cases, 256);
        }
    }

    #[test]
    fn inclusive_domain_counts() {
        let opts = SweepOptions {
            domain: Domain::Inclusive,
            workers: Some(2),
        };
        let r = sweep_multiply_mae(Method::ScalableDeterministic, 4, &opts).unwrap();
        assert_eq!(r.cases, 289);
        assert_eq!(r.exact_abs_error_bits, 0);
    }
}
