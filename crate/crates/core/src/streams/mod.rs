//! Unary values, bit streams, and comparator-driven stream generation.
//!
//! A stream generator holds an operand in a register and compares it with a
//! number source every clock: the output bit is 1 iff `source(t) < operand`.
//! With the sequential counter as source the result is a thermometer code.

mod bitstream;
pub mod halton;
pub mod lfsr;
pub mod sobol;
mod value;

use std::fmt;
use std::str::FromStr;

pub use bitstream::BitStream;
pub use halton::halton_point;
pub use lfsr::lfsr_step;
pub use sobol::sobol_point;
pub use value::{round_half_even, round_half_up, UnaryValue, MAX_RESOLUTION_LOG2};

use crate::error::{Error, Result};

/// The number source that drives a comparator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    UnaryCounter,
    Lfsr,
    Sobol,
    Halton,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::UnaryCounter,
        GeneratorKind::Lfsr,
        GeneratorKind::Sobol,
        GeneratorKind::Halton,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::UnaryCounter => "counter",
            GeneratorKind::Lfsr => "lfsr",
            GeneratorKind::Sobol => "sobol",
            GeneratorKind::Halton => "halton",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "counter" | "unary" | "unarycounter" => Ok(GeneratorKind::UnaryCounter),
            "lfsr" => Ok(GeneratorKind::Lfsr),
            "sobol" => Ok(GeneratorKind::Sobol),
            "halton" => Ok(GeneratorKind::Halton),
            other => Err(Error::param(format!("unknown generator kind {other:?}"))),
        }
    }
}

/// Source parameters. Each variant carries only what its kind needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    UnaryCounter,
    Lfsr { polynomial: u64, seed: u64 },
    Sobol { dimension: usize },
    Halton { base: u32 },
}

/// A number source plus the stream width `n` (stream length `2^n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub source: Source,
    pub width_log2: u32,
}

impl GeneratorSpec {
    pub fn counter(width_log2: u32) -> Self {
        Self {
            source: Source::UnaryCounter,
            width_log2,
        }
    }

    /// LFSR with the tabulated maximal polynomial for the width.
    pub fn lfsr(width_log2: u32, seed: u64) -> Result<Self> {
        let polynomial = lfsr::default_polynomial(width_log2).ok_or_else(|| {
            Error::param(format!(
                "no default LFSR polynomial for width {width_log2} (supported {}..={})",
                lfsr::MIN_WIDTH,
                lfsr::MAX_WIDTH
            ))
        })?;
        Ok(Self {
            source: Source::Lfsr { polynomial, seed },
            width_log2,
        })
    }

    pub fn sobol(width_log2: u32, dimension: usize) -> Self {
        Self {
            source: Source::Sobol { dimension },
            width_log2,
        }
    }

    pub fn halton(width_log2: u32, base: u32) -> Self {
        Self {
            source: Source::Halton { base },
            width_log2,
        }
    }

    /// Default spec for the `index`-th independent stream of a kind.
    pub fn default_for(kind: GeneratorKind, width_log2: u32, index: usize) -> Result<Self> {
        Ok(match kind {
            GeneratorKind::UnaryCounter => Self::counter(width_log2),
            GeneratorKind::Lfsr => Self::lfsr(width_log2, lfsr::default_seed(index, width_log2))?,
            GeneratorKind::Sobol => {
                Self::sobol(width_log2, index % sobol::DirectionTable::standard().dimensions())
            }
            GeneratorKind::Halton => {
                Self::halton(width_log2, halton::DEFAULT_BASES[index % halton::DEFAULT_BASES.len()])
            }
        })
    }

    pub fn kind(&self) -> GeneratorKind {
        match self.source {
            Source::UnaryCounter => GeneratorKind::UnaryCounter,
            Source::Lfsr { .. } => GeneratorKind::Lfsr,
            Source::Sobol { .. } => GeneratorKind::Sobol,
            Source::Halton { .. } => GeneratorKind::Halton,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.width_log2 > MAX_RESOLUTION_LOG2 {
            return Err(Error::param(format!("stream width 2^{} too large", self.width_log2)));
        }
        match self.source {
            Source::UnaryCounter => Ok(()),
            Source::Lfsr { polynomial, seed } => {
                if seed & ((1u64 << self.width_log2) - 1) == 0 {
                    return Err(Error::param("LFSR seed must be non-zero"));
                }
                lfsr_step(seed, polynomial, self.width_log2).map(|_| ())
            }
            Source::Sobol { dimension } => sobol::DirectionTable::standard()
                .direction_numbers(dimension)
                .map(|_| ()),
            Source::Halton { base } => halton::radical_inverse(0, base).map(|_| ()),
        }
    }

    /// The `2^n` source numbers, each in `[0, 2^n)` (LFSR states are in `[1, 2^n)`).
    pub fn source_sequence(&self) -> Result<Vec<u64>> {
        self.validate()?;
        let n = self.width_log2;
        let len = 1usize << n;
        match self.source {
            Source::UnaryCounter => Ok((0..len as u64).collect()),
            Source::Lfsr { polynomial, seed } => lfsr::sequence(polynomial, n, seed, len),
            Source::Sobol { dimension } => sobol::DirectionTable::standard().sequence(dimension, n),
            Source::Halton { base } => halton::sequence(base, n),
        }
    }

    /// Short `key=value` description of the parameters, for report headers.
    pub fn describe(&self) -> String {
        match self.source {
            Source::UnaryCounter => "counter".to_string(),
            Source::Lfsr { polynomial, seed } => format!("lfsr(poly={polynomial:#x},seed={seed})"),
            Source::Sobol { dimension } => format!("sobol(dim={dimension})"),
            Source::Halton { base } => format!("halton(base={base})"),
        }
    }
}

/// Comparator output over a precomputed source sequence.
pub fn compare_stream(sources: &[u64], numerator: u64) -> BitStream {
    BitStream::from_fn(sources.len(), |t| sources[t] < numerator)
}

/// Generates the `2^n`-bit stream for `value` from the configured source.
pub fn generate_stream(value: UnaryValue, spec: &GeneratorSpec) -> Result<BitStream> {
    if value.resolution_log2() != spec.width_log2 {
        return Err(Error::param(format!(
            "value resolution 2^{} does not match generator width 2^{}",
            value.resolution_log2(),
            spec.width_log2
        )));
    }
    if let Source::UnaryCounter = spec.source {
        let len = 1usize << spec.width_log2;
        return Ok(BitStream::thermometer(value.numerator() as usize, len));
    }
    let sources = spec.source_sequence()?;
    Ok(compare_stream(&sources, value.numerator()))
}

/// `popcount / length` of a power-of-two-length stream.
pub fn measure(stream: &BitStream) -> Result<UnaryValue> {
    stream.measure()
}

pub fn is_thermometer(stream: &BitStream) -> bool {
    stream.is_thermometer()
}
