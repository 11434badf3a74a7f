//! Component-count area model in NAND2 equivalents.
//!
//! Each design is tallied as a bag of components (register bits, counter
//! bits, comparator bits, gates, direction-vector cells) and priced with a
//! [`ComponentCosts`] table. Percentages are relative to the Sobol design.

mod calibrate;

pub use calibrate::{calibrate, Calibration, CalibrationTarget, TABLE_TARGETS};

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::funcs::SeriesSpec;

const DEFAULT_COSTS: &str = include_str!("../../data/costs.conf");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    RegisterBit,
    CounterBit,
    ComparatorBit,
    Mux2,
    Xor,
    And,
    Not,
    DirectionVectorCell,
}

impl Component {
    pub const ALL: [Component; 8] = [
        Component::RegisterBit,
        Component::CounterBit,
        Component::ComparatorBit,
        Component::Mux2,
        Component::Xor,
        Component::And,
        Component::Not,
        Component::DirectionVectorCell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::RegisterBit => "register_bit",
            Component::CounterBit => "counter_bit",
            Component::ComparatorBit => "comparator_bit",
            Component::Mux2 => "mux2",
            Component::Xor => "xor",
            Component::And => "and",
            Component::Not => "not",
            Component::DirectionVectorCell => "direction_vector_cell",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Component::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::param(format!("unknown component '{s}'")))
    }
}

/// Unit cost of each component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentCosts {
    unit: [f64; 8],
}

impl ComponentCosts {
    pub fn new(unit: [f64; 8]) -> Result<Self> {
        if let Some(i) = unit.iter().position(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::param(format!(
                "unit cost of {} must be positive, got {}",
                Component::ALL[i].name(),
                unit[i]
            )));
        }
        Ok(Self { unit })
    }

    pub fn get(&self, c: Component) -> f64 {
        self.unit[c.index()]
    }

    pub fn as_array(&self) -> [f64; 8] {
        self.unit
    }

    /// Parses `component = cost` lines over the defaults.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut unit = Self::default().unit;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(origin, i + 1, "expected component = cost"))?;
            let c: Component = k.trim().parse().map_err(|e: Error| Error::parse(origin, i + 1, e.to_string()))?;
            unit[c.index()] = v
                .trim()
                .parse()
                .map_err(|_| Error::parse(origin, i + 1, format!("bad cost '{}'", v.trim())))?;
        }
        Self::new(unit)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn describe(&self) -> String {
        Component::ALL
            .iter()
            .map(|c| format!("{}={}", c.name(), self.get(*c)))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Default for ComponentCosts {
    fn default() -> Self {
        let mut unit = [0.0; 8];
        for (i, raw) in DEFAULT_COSTS.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if let Some((k, v)) = line.split_once('=') {
                let c: Component = k.trim().parse().unwrap_or_else(|_| panic!("costs.conf line {}", i + 1));
                unit[c.index()] = v.trim().parse().expect("shipped cost parses");
            }
        }
        Self { unit }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Design {
    Lfsr,
    Sobol,
    Halton,
    /// The downscale-and-compensate multiplier.
    ScalableDeterministic,
    /// Clock-division multiplier with full `2^(2n)` output.
    PlainDeterministic,
}

impl Design {
    pub const ALL: [Design; 5] = [
        Design::Lfsr,
        Design::Sobol,
        Design::Halton,
        Design::ScalableDeterministic,
        Design::PlainDeterministic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Design::Lfsr => "lfsr",
            Design::Sobol => "sobol",
            Design::Halton => "halton",
            Design::ScalableDeterministic => "det",
            Design::PlainDeterministic => "plain",
        }
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Design {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lfsr" => Ok(Design::Lfsr),
            "sobol" => Ok(Design::Sobol),
            "halton" => Ok(Design::Halton),
            "det" | "ours" | "scalable" | "deterministic" => Ok(Design::ScalableDeterministic),
            "plain" | "clockdiv" => Ok(Design::PlainDeterministic),
            other => Err(Error::param(format!("unknown design '{other}'"))),
        }
    }
}

/// Component counts of one design.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tally {
    counts: [f64; 8],
}

impl Tally {
    fn add(&mut self, c: Component, k: u64) {
        self.counts[c.index()] += k as f64;
    }

    pub fn count(&self, c: Component) -> f64 {
        self.counts[c.index()]
    }

    pub fn as_array(&self) -> [f64; 8] {
        self.counts
    }

    pub fn price(&self, costs: &ComponentCosts) -> f64 {
        self.counts.iter().zip(costs.unit.iter()).map(|(k, c)| k * c).sum()
    }

    pub fn to_map(&self) -> BTreeMap<&'static str, f64> {
        Component::ALL
            .iter()
            .filter(|c| self.count(**c) != 0.0)
            .map(|c| (c.name(), self.count(*c)))
            .collect()
    }
}

use Component::*;

/// Output AND plus the `n+1`-bit counter that measures the product.
fn output_stage(t: &mut Tally, n: u64) {
    t.add(And, 1);
    t.add(CounterBit, n + 1);
}

/// Operand register (value + working copy) and its comparator.
fn operand_front(t: &mut Tally, n: u64) {
    t.add(RegisterBit, 2 * n);
    t.add(ComparatorBit, n);
}

fn tally_lfsr(n: u64) -> Tally {
    let mut t = Tally::default();
    for _ in 0..2 {
        operand_front(&mut t, n);
        t.add(Xor, 3);
    }
    output_stage(&mut t, n);
    t
}

fn tally_sobol(n: u64) -> Tally {
    let mut t = Tally::default();
    t.add(CounterBit, n);
    for _ in 0..2 {
        operand_front(&mut t, n);
        t.add(DirectionVectorCell, n * n);
        t.add(Xor, n);
        t.add(And, n);
        t.add(Not, n);
    }
    output_stage(&mut t, n);
    t
}

fn tally_halton(n: u64) -> Tally {
    let mut t = Tally::default();
    for base in [2u64, 3] {
        operand_front(&mut t, n);
        let digit_bits = 64 - (base - 1).leading_zeros() as u64;
        let digits = (n as f64 / (base as f64).log2()).ceil() as u64;
        t.add(CounterBit, digits * digit_bits);
        if !base.is_power_of_two() {
            // Digit-reversed base-b fraction to binary: one constant
            // multiply-add row per digit.
            t.add(Xor, n * digits);
            t.add(And, n * digits);
        }
    }
    output_stage(&mut t, n);
    t
}

fn tally_scalable(n: u64) -> Tally {
    let hi = n.div_ceil(2);
    let lo = n / 2;
    let mut t = Tally::default();
    // Operand registers, shared i/j counters and rollover detect.
    t.add(RegisterBit, 2 * n);
    t.add(CounterBit, hi + lo);
    t.add(And, hi - 1);
    // Stage 1: two small clock-division products and their accumulators.
    t.add(ComparatorBit, 2 * lo + 2 * hi);
    t.add(And, 2);
    t.add(CounterBit, (lo + 1) + (hi + 1));
    // Stage 2 stream generators.
    t.add(ComparatorBit, hi + lo);
    // Flip control per operand.
    for (w, o) in [(hi, lo), (lo, hi)] {
        t.add(Xor, w + o);
        t.add(And, w + 1);
        t.add(ComparatorBit, 2 * o);
        t.add(Mux2, 1);
        t.add(Not, 1);
    }
    output_stage(&mut t, n);
    t
}

fn tally_plain(n: u64) -> Tally {
    let mut t = Tally::default();
    t.add(RegisterBit, 2 * n);
    t.add(CounterBit, 2 * n);
    t.add(ComparatorBit, 2 * n);
    t.add(And, n);
    t.add(CounterBit, 2 * n + 1);
    t
}

pub fn tally(design: Design, n: u32) -> Result<Tally> {
    if n < 2 {
        return Err(Error::param(format!("cost model needs n >= 2, got {n}")));
    }
    let n = n as u64;
    Ok(match design {
        Design::Lfsr => tally_lfsr(n),
        Design::Sobol => tally_sobol(n),
        Design::Halton => tally_halton(n),
        Design::ScalableDeterministic => tally_scalable(n),
        Design::PlainDeterministic => tally_plain(n),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateCostEstimate {
    pub design: Design,
    pub n: u32,
    pub tally: Tally,
    pub total: f64,
    /// Percentage of the Sobol design at the same `n`.
    pub relative_pct: f64,
}

pub fn estimate(design: Design, n: u32, costs: &ComponentCosts) -> Result<GateCostEstimate> {
    let t = tally(design, n)?;
    let total = t.price(costs);
    let sobol = tally(Design::Sobol, n)?.price(costs);
    Ok(GateCostEstimate {
        design,
        n,
        tally: t,
        total,
        relative_pct: 100.0 * total / sobol,
    })
}

/// Estimates for every `(design, n)`, designs outermost.
pub fn cost_table(designs: &[Design], n_values: &[u32], costs: &ComponentCosts) -> Result<Vec<GateCostEstimate>> {
    if designs.is_empty() || n_values.is_empty() {
        return Err(Error::param("cost table needs at least one design and one n"));
    }
    let mut rows = Vec::with_capacity(designs.len() * n_values.len());
    for &d in designs {
        for &n in n_values {
            rows.push(estimate(d, n, costs)?);
        }
    }
    Ok(rows)
}

pub fn write_cost_csv<W: Write>(rows: &[GateCostEstimate], mut out: W) -> std::io::Result<()> {
    writeln!(out, "design,n,total_nand,relative_pct")?;
    for r in rows {
        writeln!(out, "{},{},{:.4},{:.4}", r.design, r.n, r.total, r.relative_pct)?;
    }
    Ok(())
}

/// Cost of a series evaluator: one multiply circuit per multiply site.
pub fn function_cost(design: Design, spec: &SeriesSpec, n: u32, costs: &ComponentCosts) -> Result<GateCostEstimate> {
    let single = estimate(design, n, costs)?;
    let k = spec.multiply_count() as f64;
    let mut t = single.tally.clone();
    for c in t.counts.iter_mut() {
        *c *= k;
    }
    Ok(GateCostEstimate {
        design,
        n,
        total: single.total * k,
        relative_pct: single.relative_pct,
        tally: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_load() {
        let c = ComponentCosts::default();
        assert_eq!(c.get(RegisterBit), 4.0);
        assert_eq!(c.get(Mux2), 3.0);
        assert_eq!(c.get(ComparatorBit), 5.0);
        assert_eq!(c.get(Xor), 3.0);
    }

    #[test]
    fn parse_overrides() {
        let c = ComponentCosts::parse("xor = 2.5\n# c\n", "t").unwrap();
        assert_eq!(c.get(Xor), 2.5);
        assert_eq!(c.get(And), 1.5);
        assert!(ComponentCosts::parse("xor = 0\n", "t").is_err());
        assert!(ComponentCosts::parse("flipflop = 2\n", "t").is_err());
    }

    #[test]
    fn sobol_is_reference() {
        let c = ComponentCosts::default();
        for n in 2..12 {
            assert_eq!(estimate(Design::Sobol, n, &c).unwrap().relative_pct, 100.0);
        }
        assert!(estimate(Design::Lfsr, 1, &c).is_err());
        assert!("ripple".parse::<Design>().is_err());
    }

    #[test]
    fn sobol_direction_vector_quadruples() {
        let t4 = tally(Design::Sobol, 4).unwrap().count(DirectionVectorCell);
        let t8 = tally(Design::Sobol, 8).unwrap().count(DirectionVectorCell);
        assert_eq!(t8 / t4, 4.0);
    }

    #[test]
    fn csv_shape() {
        let rows = cost_table(&[Design::Sobol], &[4], &ComponentCosts::default()).unwrap();
        let mut buf = Vec::new();
        write_cost_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.ends_with("sobol,4,327.5000,100.0000\n"));
    }
}
