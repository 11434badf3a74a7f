use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{pct, with_workers, Domain, ReportTable};
use crate::error::{Error, Result};
use crate::matrix::{exact_matmul, Engine, EngineConfig, FixedMatrix, SignedWeightMatrix};
use crate::method::Method;
use crate::streams::round_half_up;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixDims {
    pub r1: usize,
    pub c1: usize,
    pub c2: usize,
}

impl Default for MatrixDims {
    fn default() -> Self {
        Self { r1: 256, c1: 256, c2: 32 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixTrialConfig {
    pub dims: MatrixDims,
    pub n: u32,
    pub trials: u32,
    pub seed: u64,
    pub domain: Domain,
    pub workers: Option<usize>,
}

impl MatrixTrialConfig {
    pub fn new(n: u32, seed: u64) -> Self {
        Self {
            dims: MatrixDims::default(),
            n,
            trials: 20,
            seed,
            domain: Domain::Register,
            workers: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixReport {
    pub method: Method,
    pub n: u32,
    pub dims: MatrixDims,
    pub trials: u32,
    /// Products entering the result, over all trials.
    pub products: u64,
    /// Mean `|product - optimal approximation|` over every product.
    pub mae_pct: f64,
    /// Mean `|C - exact C|` per element, divided by the inner dimension.
    pub elem_mae_pct: f64,
    pub sources: String,
}

/// Error sums of one matrix product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MatmulError {
    /// `sum |product - ideal|` over all products, in output bits.
    pub product_abs_bits: u128,
    /// `sum |C - exact|` over the elements, over `2^(2n)`.
    pub element_abs: u128,
}

pub fn matmul_error(engine: &Engine, a: &FixedMatrix, b: &FixedMatrix) -> Result<MatmulError> {
    let n = engine.config().resolution_log2;
    let weights = SignedWeightMatrix::from(b.clone());
    let c = engine.matmul(a, &weights)?;
    let exact = exact_matmul(a, &weights)?;
    let element_abs = c
        .numerators
        .iter()
        .zip(&exact.numerators)
        .map(|(&got, &want)| ((got << n) - want).unsigned_abs())
        .sum();

    // Each inner index j pairs column j of A with row j of B, so the
    // per-product error only depends on the two value histograms.
    let side = (1usize << n) + 1;
    let table = engine.table();
    let err: Vec<u64> = (0..side * side)
        .map(|idx| {
            let (x, y) = ((idx / side) as u64, (idx % side) as u64);
            table.get(x, y).abs_diff(round_half_up((x * y) as u128, 1u128 << n) as u64)
        })
        .collect();
    let mut product_abs_bits = 0u128;
    let mut ha = vec![0u64; side];
    let mut hb = vec![0u64; side];
    for j in 0..a.cols() {
        ha.iter_mut().for_each(|h| *h = 0);
        hb.iter_mut().for_each(|h| *h = 0);
        for i in 0..a.rows() {
            ha[a.numerator(i, j) as usize] += 1;
        }
        for k in 0..b.cols() {
            hb[b.numerator(j, k) as usize] += 1;
        }
        for (x, &ca) in ha.iter().enumerate().filter(|(_, c)| **c > 0) {
            for (y, &cb) in hb.iter().enumerate().filter(|(_, c)| **c > 0) {
                product_abs_bits += (ca * cb * err[x * side + y]) as u128;
            }
        }
    }
    Ok(MatmulError {
        product_abs_bits,
        element_abs,
    })
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, n: u32, domain: Domain) -> Result<FixedMatrix> {
    let top = domain.max_numerator(n);
    let values = (0..rows * cols).map(|_| rng.gen_range(0..=top)).collect();
    FixedMatrix::new(rows, cols, n, values)
}

/// Random `r1 x c1` and `c1 x c2` operands per trial from a ChaCha8 stream
/// seeded with `seed`; every method sees the same matrices.
pub fn matrix_trials(config: &MatrixTrialConfig, methods: &[Method]) -> Result<Vec<MatrixReport>> {
    if config.trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let MatrixDims { r1, c1, c2 } = config.dims;
    if r1 == 0 || c1 == 0 || c2 == 0 {
        return Err(Error::param("matrix dimensions must be positive"));
    }
    let n = config.n;
    let engines = methods
        .iter()
        .map(|&m| Engine::new(EngineConfig::new(m, n)))
        .collect::<Result<Vec<_>>>()?;
    let mut totals = vec![MatmulError::default(); methods.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.trials {
        let a = random_matrix(&mut rng, r1, c1, n, config.domain)?;
        let b = random_matrix(&mut rng, c1, c2, n, config.domain)?;
        for (engine, total) in engines.iter().zip(totals.iter_mut()) {
            let e = with_workers(config.workers, || matmul_error(engine, &a, &b))??;
            total.product_abs_bits += e.product_abs_bits;
            total.element_abs += e.element_abs;
        }
    }
    let elements = (r1 * c2) as f64 * config.trials as f64;
    let products = elements * c1 as f64;
    let scale = (1u64 << n) as f64;
    Ok(methods
        .iter()
        .zip(engines.iter().zip(totals))
        .map(|(&method, (engine, t))| MatrixReport {
            method,
            n,
            dims: config.dims,
            trials: config.trials,
            products: products as u64,
            mae_pct: 100.0 * t.product_abs_bits as f64 / (products * scale),
            elem_mae_pct: 100.0 * t.element_abs as f64 / (products * scale * scale),
            sources: engine.multiplier().describe(),
        })
        .collect())
}

/// `method,n,r1,c1,c2,trials,mae_pct`.
pub fn matrix_table(reports: &[MatrixReport], config: &MatrixTrialConfig) -> ReportTable {
    let mut t = ReportTable::new(&["method", "n", "r1", "c1", "c2", "trials", "mae_pct"]);
    t.comment("report", "matmul");
    t.comment("mae", "100*mean(|product-ideal|) over every product entering C,values_in_[0,1]");
    t.comment("elem_mae", "100*mean(|C-exact C|)/c1");
    t.comment("seed", config.seed);
    t.comment("rng", "chacha8");
    t.comment("domain", config.domain);
    for r in reports {
        let key = format!("{},n={}", r.method, r.n);
        t.comment(format!("sources[{key}]"), &r.sources);
        t.comment(format!("elem_mae_pct[{key}]"), pct(r.elem_mae_pct));
        t.push_row(vec![
            r.method.to_string(),
            r.n.to_string(),
            r.dims.r1.to_string(),
            r.dims.c1.to_string(),
            r.dims.c2.to_string(),
            r.trials.to_string(),
            pct(r.mae_pct),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrices_have_no_error() {
        for m in Method::ALL {
            let engine = Engine::new(EngineConfig::new(m, 4)).unwrap();
            let a = FixedMatrix::zeros(3, 4, 4).unwrap();
            let b = FixedMatrix::zeros(4, 2, 4).unwrap();
            assert_eq!(matmul_error(&engine, &a, &b).unwrap(), MatmulError::default());
        }
    }

    #[test]
    fn seeded_trials_repeat() {
        let mut cfg = MatrixTrialConfig::new(4, 7);
        cfg.dims = MatrixDims { r1: 8, c1: 8, c2: 4 };
        cfg.trials = 3;
        let a = matrix_trials(&cfg, &Method::ALL).unwrap();
        cfg.workers = Some(1);
        assert_eq!(a, matrix_trials(&cfg, &Method::ALL).unwrap());
    }
}
