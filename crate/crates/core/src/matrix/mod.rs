//! Dot products with unary multipliers and exact binary accumulation.
//!
//! Every product `x * |w|` goes through the configured multiplier. Products
//! of positive weights go into one integer counter and products of negative
//! weights into another; the result is their difference over `2^n`.

mod io;

pub use io::{parse_matrix, read_matrix, write_matrix, write_result_csv, MatrixFile};

use std::fmt;

use rayon::prelude::*;

use crate::detmul::pipeline_model;
use crate::error::{Error, Result};
use crate::method::{Method, Multiplier, ProductTable};
use crate::streams::UnaryValue;

/// `numerator / 2^resolution_log2` with a signed numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedRational {
    pub numerator: i128,
    pub resolution_log2: u32,
}

impl SignedRational {
    pub fn new(numerator: i128, resolution_log2: u32) -> Self {
        Self {
            numerator,
            resolution_log2,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / (1u128 << self.resolution_log2) as f64
    }
}

impl fmt::Display for SignedRational {
    /// Exact decimal expansion.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.resolution_log2;
        let mag = self.numerator.unsigned_abs();
        let int = mag >> r;
        let frac = mag & ((1u128 << r) - 1);
        if self.numerator < 0 {
            f.write_str("-")?;
        }
        write!(f, "{int}")?;
        if frac != 0 {
            // frac / 2^r = frac * 5^r / 10^r
            let digits = format!("{:0>width$}", frac * 5u128.pow(r), width = r as usize);
            write!(f, ".{}", digits.trim_end_matches('0'))?;
        }
        Ok(())
    }
}

/// Row-major matrix of unary values at one resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedMatrix {
    rows: usize,
    cols: usize,
    resolution_log2: u32,
    numerators: Vec<u64>,
}

impl FixedMatrix {
    pub fn new(rows: usize, cols: usize, resolution_log2: u32, numerators: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::param("matrix dimensions must be positive"));
        }
        if numerators.len() != rows * cols {
            return Err(Error::param(format!(
                "{rows}x{cols} matrix needs {} elements, got {}",
                rows * cols,
                numerators.len()
            )));
        }
        if resolution_log2 > ProductTable::MAX_RESOLUTION_LOG2 {
            return Err(Error::param(format!("matrix resolution 2^{resolution_log2} is too large")));
        }
        let top = 1u64 << resolution_log2;
        if let Some(k) = numerators.iter().find(|&&k| k > top) {
            return Err(Error::param(format!("element {k} exceeds 2^{resolution_log2}")));
        }
        Ok(Self {
            rows,
            cols,
            resolution_log2,
            numerators,
        })
    }

    pub fn zeros(rows: usize, cols: usize, resolution_log2: u32) -> Result<Self> {
        Self::new(rows, cols, resolution_log2, vec![0; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn resolution_log2(&self) -> u32 {
        self.resolution_log2
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn numerator(&self, i: usize, j: usize) -> u64 {
        self.numerators[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> UnaryValue {
        UnaryValue::new(self.numerator(i, j), self.resolution_log2).expect("validated on construction")
    }
}

/// Weight magnitudes with a sign per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedWeightMatrix {
    magnitudes: FixedMatrix,
    negative: Vec<bool>,
}

impl SignedWeightMatrix {
    pub fn new(magnitudes: FixedMatrix, negative: Vec<bool>) -> Result<Self> {
        if negative.len() != magnitudes.numerators.len() {
            return Err(Error::param(format!(
                "{} signs for {} magnitudes",
                negative.len(),
                magnitudes.numerators.len()
            )));
        }
        Ok(Self { magnitudes, negative })
    }

    pub fn magnitudes(&self) -> &FixedMatrix {
        &self.magnitudes
    }

    pub fn is_negative(&self, i: usize, j: usize) -> bool {
        self.negative[i * self.magnitudes.cols + j]
    }

    pub fn signs(&self) -> &[bool] {
        &self.negative
    }

    /// Every sign flipped.
    pub fn negated(&self) -> Self {
        Self {
            magnitudes: self.magnitudes.clone(),
            negative: self.negative.iter().map(|s| !s).collect(),
        }
    }
}

impl From<FixedMatrix> for SignedWeightMatrix {
    fn from(magnitudes: FixedMatrix) -> Self {
        let negative = vec![false; magnitudes.numerators.len()];
        Self { magnitudes, negative }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weight {
    pub magnitude: UnaryValue,
    pub negative: bool,
}

impl Weight {
    pub fn positive(magnitude: UnaryValue) -> Self {
        Self {
            magnitude,
            negative: false,
        }
    }

    pub fn negative(magnitude: UnaryValue) -> Self {
        Self {
            magnitude,
            negative: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub multiplier: Method,
    /// Stream generators (register + comparator) available in parallel.
    pub comparator_count: usize,
    pub resolution_log2: u32,
}

impl EngineConfig {
    pub fn new(multiplier: Method, resolution_log2: u32) -> Self {
        Self {
            multiplier,
            comparator_count: 1,
            resolution_log2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.comparator_count == 0 {
            return Err(Error::param("comparator_count must be at least 1"));
        }
        Ok(())
    }
}

/// Output of a matrix product: signed rationals at the engine resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultMatrix {
    pub rows: usize,
    pub cols: usize,
    pub resolution_log2: u32,
    /// Row-major `pos_sum - neg_sum` numerators.
    pub numerators: Vec<i128>,
}

impl ResultMatrix {
    pub fn get(&self, i: usize, k: usize) -> SignedRational {
        SignedRational::new(self.numerators[i * self.cols + k], self.resolution_log2)
    }
}

/// A multiplier plus the table of all its products.
#[derive(Clone, Debug)]
pub struct Engine {
    config: EngineConfig,
    multiplier: Multiplier,
    table: ProductTable,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        config.validate()?;
        let multiplier = Multiplier::new(config.multiplier, config.resolution_log2, 0)?;
        let table = ProductTable::build(&multiplier)?;
        Ok(Self {
            config,
            multiplier,
            table,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn multiplier(&self) -> &Multiplier {
        &self.multiplier
    }

    pub fn table(&self) -> &ProductTable {
        &self.table
    }

    fn check(&self, v: UnaryValue) -> Result<()> {
        if v.resolution_log2() != self.config.resolution_log2 {
            return Err(Error::param(format!(
                "operand {v} is not at engine resolution 2^{}",
                self.config.resolution_log2
            )));
        }
        Ok(())
    }

    pub fn dot_product(&self, x: &[UnaryValue], w: &[Weight]) -> Result<SignedRational> {
        if x.len() != w.len() {
            return Err(Error::param(format!("{} inputs for {} weights", x.len(), w.len())));
        }
        let (mut pos, mut neg) = (0u128, 0u128);
        for (xi, wi) in x.iter().zip(w) {
            self.check(*xi)?;
            self.check(wi.magnitude)?;
            let p = self.table.get(xi.numerator(), wi.magnitude.numerator()) as u128;
            if wi.negative {
                neg += p;
            } else {
                pos += p;
            }
        }
        Ok(SignedRational::new(pos as i128 - neg as i128, self.config.resolution_log2))
    }

    pub fn matmul(&self, a: &FixedMatrix, b: &SignedWeightMatrix) -> Result<ResultMatrix> {
        let bm = &b.magnitudes;
        if a.cols != bm.rows {
            return Err(Error::param(format!(
                "cannot multiply {}x{} by {}x{}",
                a.rows, a.cols, bm.rows, bm.cols
            )));
        }
        let n = self.config.resolution_log2;
        if a.resolution_log2 != n || bm.resolution_log2 != n {
            return Err(Error::param(format!("matrices must be at engine resolution 2^{n}")));
        }
        let numerators = (0..a.rows)
            .into_par_iter()
            .flat_map_iter(|i| {
                (0..bm.cols).map(move |k| {
                    let (mut pos, mut neg) = (0i128, 0i128);
                    for j in 0..a.cols {
                        let p = self.table.get(a.numerator(i, j), bm.numerator(j, k)) as i128;
                        if b.is_negative(j, k) {
                            neg += p;
                        } else {
                            pos += p;
                        }
                    }
                    pos - neg
                })
            })
            .collect();
        Ok(ResultMatrix {
            rows: a.rows,
            cols: bm.cols,
            resolution_log2: n,
            numerators,
        })
    }
}

pub fn dot_product(x: &[UnaryValue], w: &[Weight], config: &EngineConfig) -> Result<SignedRational> {
    Engine::new(*config)?.dot_product(x, w)
}

pub fn matmul(a: &FixedMatrix, b: &SignedWeightMatrix, config: &EngineConfig) -> Result<ResultMatrix> {
    Engine::new(*config)?.matmul(a, b)
}

/// Exact rational product; numerators over `2^(2n)`.
pub fn exact_matmul(a: &FixedMatrix, b: &SignedWeightMatrix) -> Result<ResultMatrix> {
    let bm = &b.magnitudes;
    if a.cols != bm.rows || a.resolution_log2 != bm.resolution_log2 {
        return Err(Error::param("operand shapes or resolutions do not match"));
    }
    let numerators = (0..a.rows)
        .flat_map(|i| {
            (0..bm.cols).map(move |k| {
                (0..a.cols)
                    .map(|j| {
                        let p = (a.numerator(i, j) * bm.numerator(j, k)) as i128;
                        if b.is_negative(j, k) {
                            -p
                        } else {
                            p
                        }
                    })
                    .sum()
            })
        })
        .collect();
    Ok(ResultMatrix {
        rows: a.rows,
        cols: bm.cols,
        resolution_log2: 2 * a.resolution_log2,
        numerators,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatencyEstimate {
    pub products: u64,
    /// Two operand streams per product, each needing its own comparator.
    pub streams_needed: u64,
    pub comparator_count: u64,
    pub waves: u64,
    pub interval: u64,
    pub cycles: u64,
}

/// Cycle estimate for `a_dims x b_dims`: the products run in waves limited
/// by the number of comparators, one multiplier interval per wave.
pub fn latency_model(a_dims: (usize, usize), b_dims: (usize, usize), config: &EngineConfig) -> Result<LatencyEstimate> {
    config.validate()?;
    if a_dims.1 != b_dims.0 {
        return Err(Error::param(format!(
            "cannot multiply {}x{} by {}x{}",
            a_dims.0, a_dims.1, b_dims.0, b_dims.1
        )));
    }
    let products = (a_dims.0 * a_dims.1 * b_dims.1) as u64;
    let streams_needed = 2 * products;
    let comparators = config.comparator_count as u64;
    let waves = streams_needed.div_ceil(comparators);
    let interval = match config.multiplier {
        Method::ScalableDeterministic => pipeline_model(1, config.resolution_log2)?.steady_state_interval,
        _ => 1u64 << config.resolution_log2,
    };
    Ok(LatencyEstimate {
        products,
        streams_needed,
        comparator_count: comparators,
        waves,
        interval,
        cycles: waves * interval,
    })
}

/// Latency for each comparator count, for the area/latency trade-off.
pub fn latency_curve(
    a_dims: (usize, usize),
    b_dims: (usize, usize),
    config: &EngineConfig,
    comparator_counts: &[usize],
) -> Result<Vec<LatencyEstimate>> {
    comparator_counts
        .iter()
        .map(|&c| {
            latency_model(
                a_dims,
                b_dims,
                &EngineConfig {
                    comparator_count: c,
                    ..*config
                },
            )
        })
        .collect()
}
