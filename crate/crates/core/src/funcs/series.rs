use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::{half_select, mux_scaled_add};
use crate::error::{Error, Result};
use crate::method::{Method, Multiplier};
use crate::streams::{round_half_up, BitStream, UnaryValue};

/// Coefficients are stored with denominator `2^8`.
pub const COEFFICIENT_RESOLUTION_LOG2: u32 = 8;

const DEFAULT_CONFIG: &str = include_str!("../../data/functions.conf");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Function {
    ExpNeg,
    Sin,
    Log1p,
    Sigmoid,
}

impl Function {
    pub const ALL: [Function; 4] = [Function::ExpNeg, Function::Sin, Function::Log1p, Function::Sigmoid];

    pub fn name(self) -> &'static str {
        match self {
            Function::ExpNeg => "expneg",
            Function::Sin => "sin",
            Function::Log1p => "log1p",
            Function::Sigmoid => "sigmoid",
        }
    }

    pub fn exact(self, x: f64) -> f64 {
        match self {
            Function::ExpNeg => (-x).exp(),
            Function::Sin => x.sin(),
            Function::Log1p => x.ln_1p(),
            Function::Sigmoid => 1.0 / (1.0 + (-x).exp()),
        }
    }

    /// Inner stages run on `x^2` (odd series).
    fn squared_argument(self) -> bool {
        matches!(self, Function::Sin | Function::Sigmoid)
    }

    /// The outermost stage is `1 - x*c*y` rather than `x*c*y`.
    fn outer_complement(self) -> bool {
        matches!(self, Function::ExpNeg)
    }

    /// Result is `1/2 + y/2`.
    fn half_offset(self) -> bool {
        matches!(self, Function::Sigmoid)
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Function {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "expneg" | "exp" | "exp_neg" => Ok(Function::ExpNeg),
            "sin" => Ok(Function::Sin),
            "log1p" | "log" => Ok(Function::Log1p),
            "sigmoid" => Ok(Function::Sigmoid),
            other => Err(Error::param(format!("unknown function '{other}'"))),
        }
    }
}

/// A truncated series in nested form. `coefficients[0]` belongs to the
/// outermost stage:
///
/// * expneg: `1 - x c0 (1 - x c1 (1 - ...))`
/// * log1p: `x c0 (1 - x c1 (1 - x c2 (...)))`
/// * sin: `x c0 (1 - x^2 c1 (1 - x^2 c2 (...)))`
/// * sigmoid: `1/2 + 1/2 x c0 (1 - x^2 c1 (1 - ...))`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSpec {
    pub function: Function,
    pub degree: usize,
    pub coefficients: Vec<UnaryValue>,
}

impl SeriesSpec {
    pub fn new(function: Function, numerators: &[u64]) -> Result<Self> {
        let coefficients = numerators
            .iter()
            .map(|&k| UnaryValue::new(k, COEFFICIENT_RESOLUTION_LOG2))
            .collect::<Result<Vec<_>>>()?;
        let spec = Self {
            function,
            degree: coefficients.len(),
            coefficients,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The shipped coefficient set for `function`.
    pub fn default_for(function: Function) -> Self {
        Self::parse_config(DEFAULT_CONFIG, "functions.conf")
            .expect("shipped function config parses")
            .into_iter()
            .find(|s| s.function == function)
            .expect("every function has a shipped default")
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::param(format!("{}: degree must be positive", self.function)));
        }
        if self.coefficients.len() != self.degree {
            return Err(Error::param(format!(
                "{}: degree {} but {} coefficients",
                self.function,
                self.degree,
                self.coefficients.len()
            )));
        }
        if let Some(c) = self
            .coefficients
            .iter()
            .find(|c| c.resolution_log2() != COEFFICIENT_RESOLUTION_LOG2)
        {
            return Err(Error::param(format!(
                "{}: coefficient {c} is not over 2^{COEFFICIENT_RESOLUTION_LOG2}",
                self.function
            )));
        }
        Ok(())
    }

    /// Number of two-operand multiplies per evaluation.
    pub fn multiply_count(&self) -> usize {
        2 * self.degree + usize::from(self.function.squared_argument())
    }

    /// Parses `key = value` blocks, each starting with `function`.
    pub fn parse_config(text: &str, origin: &str) -> Result<Vec<Self>> {
        struct Block {
            function: Function,
            line: usize,
            degree: Option<usize>,
            numerators: Option<Vec<u64>>,
        }
        fn finish(block: Block, origin: &str) -> Result<SeriesSpec> {
            let numerators = block
                .numerators
                .ok_or_else(|| Error::parse(origin, block.line, "block has no coefficients"))?;
            let spec = SeriesSpec::new(block.function, &numerators)
                .map_err(|e| Error::parse(origin, block.line, e.to_string()))?;
            if let Some(d) = block.degree {
                if d != spec.degree {
                    return Err(Error::parse(
                        origin,
                        block.line,
                        format!("degree {d} but {} coefficients", spec.degree),
                    ));
                }
            }
            Ok(spec)
        }

        let mut specs = Vec::new();
        let mut current: Option<Block> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(origin, line_no, "expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "function" {
                if let Some(block) = current.take() {
                    specs.push(finish(block, origin)?);
                }
                let function = value.parse().map_err(|e: Error| Error::parse(origin, line_no, e.to_string()))?;
                current = Some(Block {
                    function,
                    line: line_no,
                    degree: None,
                    numerators: None,
                });
                continue;
            }
            let block = current
                .as_mut()
                .ok_or_else(|| Error::parse(origin, line_no, format!("'{key}' before any function")))?;
            match key {
                "degree" => {
                    block.degree =
                        Some(value.parse().map_err(|_| Error::parse(origin, line_no, "degree must be an integer"))?);
                }
                "coefficients" => {
                    let nums = value
                        .split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<u64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| Error::parse(origin, line_no, "coefficients must be integers"))?;
                    block.numerators = Some(nums);
                }
                other => return Err(Error::parse(origin, line_no, format!("unknown key '{other}'"))),
            }
        }
        if let Some(block) = current {
            specs.push(finish(block, origin)?);
        }
        Ok(specs)
    }

    pub fn load_config(path: &Path) -> Result<Vec<Self>> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_config(&text, &path.display().to_string())
    }

    /// One `key=value` line for report headers.
    pub fn describe(&self) -> String {
        let nums: Vec<String> = self.coefficients.iter().map(|c| c.numerator().to_string()).collect();
        format!("{}:degree={},coefficients={}", self.function, self.degree, nums.join(" "))
    }
}

/// A series bound to a method and resolution. Every multiply site gets its
/// own multiplier slot, so baseline stages draw on independent sources.
#[derive(Clone, Debug)]
pub struct SeriesEvaluator {
    spec: SeriesSpec,
    resolution_log2: u32,
    coefficients: Vec<UnaryValue>,
    multipliers: Vec<Multiplier>,
}

impl SeriesEvaluator {
    pub fn new(spec: &SeriesSpec, method: Method, resolution_log2: u32) -> Result<Self> {
        spec.validate()?;
        let coefficients = spec
            .coefficients
            .iter()
            .map(|c| requantize(*c, resolution_log2))
            .collect::<Result<Vec<_>>>()?;
        let multipliers = (0..spec.multiply_count())
            .map(|slot| Multiplier::new(method, resolution_log2, slot))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: spec.clone(),
            resolution_log2,
            coefficients,
            multipliers,
        })
    }

    pub fn spec(&self) -> &SeriesSpec {
        &self.spec
    }

    pub fn eval(&self, x: UnaryValue) -> Result<UnaryValue> {
        let n = self.resolution_log2;
        if x.resolution_log2() != n {
            return Err(Error::param(format!("input {x} is not at resolution 2^{n}")));
        }
        let function = self.spec.function;
        let mut slots = self.multipliers.iter();
        let mut mul = |a: UnaryValue, b: UnaryValue| slots.next().expect("slot per multiply").multiply(a, b);

        let arg = if function.squared_argument() { mul(x, x)? } else { x };
        let mut y = UnaryValue::one(n);
        for &c in self.coefficients[1..].iter().rev() {
            let scaled = mul(arg, c)?;
            y = mul(scaled, y)?.complement();
        }
        let scaled = mul(x, self.coefficients[0])?;
        y = mul(scaled, y)?;
        if function.outer_complement() {
            y = y.complement();
        }
        if function.half_offset() {
            let len = 1usize << n;
            let lifted = mux_scaled_add(
                &BitStream::ones(len),
                &BitStream::thermometer(y.numerator() as usize, len),
                &half_select(len),
            )?;
            y = lifted.measure()?;
        }
        Ok(y)
    }
}

fn requantize(c: UnaryValue, resolution_log2: u32) -> Result<UnaryValue> {
    let r = c.resolution_log2();
    let k = if resolution_log2 >= r {
        c.numerator() << (resolution_log2 - r)
    } else {
        round_half_up(c.numerator() as u128, 1u128 << (r - resolution_log2)) as u64
    };
    UnaryValue::new(k, resolution_log2)
}

/// Evaluates `spec` at `x` with a fresh evaluator.
pub fn maclaurin_eval(spec: &SeriesSpec, x: UnaryValue, method: Method) -> Result<UnaryValue> {
    SeriesEvaluator::new(spec, method, x.resolution_log2())?.eval(x)
}
