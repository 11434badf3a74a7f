//! Multiplication methods compared by the harness.
//!
//! The deterministic method is [`scalable_multiply`]. The baselines generate
//! one stream per operand from two independent number sources and AND them.
//! Operand pair `slot` of a baseline uses sources `2 * slot` and
//! `2 * slot + 1` from [`GeneratorSpec::default_for`].

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::detmul::scalable_multiply;
use crate::error::{Error, Result};
use crate::streams::{compare_stream, BitStream, GeneratorKind, GeneratorSpec, UnaryValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    ScalableDeterministic,
    Lfsr,
    Sobol,
    Halton,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::ScalableDeterministic, Method::Lfsr, Method::Sobol, Method::Halton];

    pub fn name(self) -> &'static str {
        match self {
            Method::ScalableDeterministic => "det",
            Method::Lfsr => "lfsr",
            Method::Sobol => "sobol",
            Method::Halton => "halton",
        }
    }

    /// Number source of a baseline; `None` for the deterministic method.
    pub fn generator_kind(self) -> Option<GeneratorKind> {
        match self {
            Method::ScalableDeterministic => None,
            Method::Lfsr => Some(GeneratorKind::Lfsr),
            Method::Sobol => Some(GeneratorKind::Sobol),
            Method::Halton => Some(GeneratorKind::Halton),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "det" | "deterministic" | "scalable" | "ours" => Ok(Method::ScalableDeterministic),
            "lfsr" => Ok(Method::Lfsr),
            "sobol" => Ok(Method::Sobol),
            "halton" => Ok(Method::Halton),
            other => Err(Error::param(format!(
                "unknown method '{other}' (expected det, lfsr, sobol or halton)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
struct Sources {
    specs: [GeneratorSpec; 2],
    seq: [Vec<u64>; 2],
}

/// A configured two-operand multiplier at a fixed resolution.
#[derive(Clone, Debug)]
pub struct Multiplier {
    method: Method,
    resolution_log2: u32,
    sources: Option<Sources>,
}

impl Multiplier {
    pub fn new(method: Method, resolution_log2: u32, slot: usize) -> Result<Self> {
        match method.generator_kind() {
            None => Ok(Self {
                method,
                resolution_log2,
                sources: None,
            }),
            Some(kind) => {
                let a = GeneratorSpec::default_for(kind, resolution_log2, 2 * slot)?;
                let b = GeneratorSpec::default_for(kind, resolution_log2, 2 * slot + 1)?;
                Self::with_sources(a, b)
            }
        }
    }

    /// A baseline multiplier over two explicit number sources.
    pub fn with_sources(a: GeneratorSpec, b: GeneratorSpec) -> Result<Self> {
        if a.width_log2 != b.width_log2 || a.kind() != b.kind() {
            return Err(Error::param("both operand sources must share kind and width"));
        }
        let method = match a.kind() {
            GeneratorKind::Lfsr => Method::Lfsr,
            GeneratorKind::Sobol => Method::Sobol,
            GeneratorKind::Halton => Method::Halton,
            GeneratorKind::UnaryCounter => {
                return Err(Error::param("two counter sources are fully correlated; use the det method"))
            }
        };
        let seq = [a.source_sequence()?, b.source_sequence()?];
        Ok(Self {
            method,
            resolution_log2: a.width_log2,
            sources: Some(Sources { specs: [a, b], seq }),
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn resolution_log2(&self) -> u32 {
        self.resolution_log2
    }

    fn check(&self, a: UnaryValue, b: UnaryValue) -> Result<()> {
        let n = self.resolution_log2;
        if a.resolution_log2() != n || b.resolution_log2() != n {
            return Err(Error::param(format!(
                "operands at 2^{} and 2^{} for a 2^{n} multiplier",
                a.resolution_log2(),
                b.resolution_log2()
            )));
        }
        Ok(())
    }

    /// The `2^n`-bit output stream.
    pub fn multiply_stream(&self, a: UnaryValue, b: UnaryValue) -> Result<BitStream> {
        self.check(a, b)?;
        match &self.sources {
            None => Ok(scalable_multiply(a, b)?.stream),
            Some(s) => compare_stream(&s.seq[0], a.numerator()).and(&compare_stream(&s.seq[1], b.numerator())),
        }
    }

    pub fn multiply(&self, a: UnaryValue, b: UnaryValue) -> Result<UnaryValue> {
        self.check(a, b)?;
        match &self.sources {
            None => Ok(scalable_multiply(a, b)?.value),
            Some(s) => {
                let (ka, kb) = (a.numerator(), b.numerator());
                let count = s.seq[0].iter().zip(&s.seq[1]).filter(|(x, y)| **x < ka && **y < kb).count();
                UnaryValue::new(count as u64, self.resolution_log2)
            }
        }
    }

    /// `key=value` parameters for report headers.
    pub fn describe(&self) -> String {
        match &self.sources {
            None => format!("{}(n={})", self.method, self.resolution_log2),
            Some(s) => format!("{},{}", s.specs[0].describe(), s.specs[1].describe()),
        }
    }
}

/// Every product of a multiplier, indexed by operand numerators `0..=2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTable {
    resolution_log2: u32,
    side: usize,
    counts: Vec<u32>,
}

impl ProductTable {
    pub const MAX_RESOLUTION_LOG2: u32 = 12;

    pub fn build(multiplier: &Multiplier) -> Result<Self> {
        let n = multiplier.resolution_log2;
        if n > Self::MAX_RESOLUTION_LOG2 {
            return Err(Error::param(format!("product table at 2^{n} is too large")));
        }
        let side = (1usize << n) + 1;
        let counts = match &multiplier.sources {
            None => {
                let rows: Result<Vec<Vec<u32>>> = (0..side)
                    .into_par_iter()
                    .map(|a| {
                        let a = UnaryValue::new(a as u64, n)?;
                        (0..side)
                            .map(|b| Ok(scalable_multiply(a, UnaryValue::new(b as u64, n)?)?.value.numerator() as u32))
                            .collect()
                    })
                    .collect();
                rows?.concat()
            }
            Some(s) => {
                // Each cycle t is counted for every pair (a, b) with
                // a > src_a(t) and b > src_b(t): a 2-D prefix sum.
                let mut grid = vec![0u32; side * side];
                for (&x, &y) in s.seq[0].iter().zip(&s.seq[1]) {
                    grid[(x as usize + 1) * side + y as usize + 1] += 1;
                }
                for a in 0..side {
                    for b in 0..side {
                        let mut v = grid[a * side + b];
                        if a > 0 {
                            v += grid[(a - 1) * side + b];
                        }
                        if b > 0 {
                            v += grid[a * side + b - 1];
                        }
                        if a > 0 && b > 0 {
                            v -= grid[(a - 1) * side + b - 1];
                        }
                        grid[a * side + b] = v;
                    }
                }
                grid
            }
        };
        Ok(Self {
            resolution_log2: n,
            side,
            counts,
        })
    }

    pub fn resolution_log2(&self) -> u32 {
        self.resolution_log2
    }

    /// Product numerator for operand numerators `a`, `b`.
    pub fn get(&self, a: u64, b: u64) -> u64 {
        self.counts[a as usize * self.side + b as usize] as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_methods() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("rng".parse::<Method>().is_err());
    }

    #[test]
    fn table_matches_direct_multiply() {
        for method in Method::ALL {
            let m = Multiplier::new(method, 4, 0).unwrap();
            let table = ProductTable::build(&m).unwrap();
            for a in 0..=16 {
                for b in 0..=16 {
                    let va = UnaryValue::new(a, 4).unwrap();
                    let vb = UnaryValue::new(b, 4).unwrap();
                    let direct = m.multiply(va, vb).unwrap().numerator();
                    assert_eq!(table.get(a, b), direct, "{method} {a}x{b}");
                    assert_eq!(m.multiply_stream(va, vb).unwrap().popcount(), direct);
                }
            }
        }
    }

    #[test]
    fn slots_use_distinct_sources() {
        let a = Multiplier::new(Method::Sobol, 4, 0).unwrap().describe();
        let b = Multiplier::new(Method::Sobol, 4, 1).unwrap().describe();
        assert_eq!(a, "sobol(dim=0),sobol(dim=1)");
        assert_ne!(a, b);
    }

    #[test]
    fn resolution_mismatch() {
        let m = Multiplier::new(Method::Halton, 4, 0).unwrap();
        let x = UnaryValue::new(1, 3).unwrap();
        assert!(m.multiply(x, x).is_err());
    }
}
