//! Least-squares fit of unit costs to target relative percentages.

use nalgebra::{DMatrix, DVector};

use super::{estimate, tally, Component, ComponentCosts, Design};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationTarget {
    pub design: Design,
    pub n: u32,
    pub relative_pct: f64,
}

/// Published gate-cost percentages relative to Sobol.
pub const TABLE_TARGETS: [CalibrationTarget; 6] = [
    CalibrationTarget { design: Design::Lfsr, n: 4, relative_pct: 53.29 },
    CalibrationTarget { design: Design::Lfsr, n: 6, relative_pct: 47.28 },
    CalibrationTarget { design: Design::Lfsr, n: 8, relative_pct: 43.05 },
    CalibrationTarget { design: Design::ScalableDeterministic, n: 4, relative_pct: 68.73 },
    CalibrationTarget { design: Design::ScalableDeterministic, n: 6, relative_pct: 63.16 },
    CalibrationTarget { design: Design::ScalableDeterministic, n: 8, relative_pct: 57.73 },
];

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub costs: ComponentCosts,
    /// `(target, fitted relative_pct)` per target.
    pub fitted: Vec<(CalibrationTarget, f64)>,
    pub rms_residual: f64,
}

const MIN_COST: f64 = 0.1;
/// Weight of the pull towards the starting costs; keeps the
/// under-determined system well posed.
const PRIOR_WEIGHT: f64 = 0.5;

/// Fits the unit costs so that `design / sobol` matches each target,
/// holding `register_bit` at its starting value.
///
/// Each target gives the linear condition
/// `(T_d - p/100 * T_sobol) . c = 0` on the cost vector `c`.
pub fn calibrate(targets: &[CalibrationTarget], start: &ComponentCosts) -> Result<Calibration> {
    if targets.is_empty() {
        return Err(Error::param("calibration needs at least one target"));
    }
    let anchor = Component::RegisterBit;
    let mut rows = Vec::with_capacity(targets.len());
    for t in targets {
        let d = tally(t.design, t.n)?.as_array();
        let s = tally(Design::Sobol, t.n)?.as_array();
        let row: [f64; 8] = std::array::from_fn(|k| d[k] - t.relative_pct / 100.0 * s[k]);
        rows.push(row);
    }
    let prior = start.as_array();
    let free: Vec<usize> = (0..8).filter(|&k| k != anchor.index()).collect();
    let mut pinned: Vec<Option<f64>> = vec![None; 8];
    pinned[anchor.index()] = Some(prior[anchor.index()]);

    let mut solution = prior;
    for _ in 0..free.len() {
        let unknown: Vec<usize> = free.iter().copied().filter(|&k| pinned[k].is_none()).collect();
        let m = rows.len() + unknown.len();
        let mut a = DMatrix::<f64>::zeros(m, unknown.len());
        let mut b = DVector::<f64>::zeros(m);
        for (r, row) in rows.iter().enumerate() {
            for (col, &k) in unknown.iter().enumerate() {
                a[(r, col)] = row[k];
            }
            b[r] = -(0..8).filter_map(|k| pinned[k].map(|v| row[k] * v)).sum::<f64>();
        }
        for (col, &k) in unknown.iter().enumerate() {
            a[(rows.len() + col, col)] = PRIOR_WEIGHT;
            b[rows.len() + col] = PRIOR_WEIGHT * prior[k];
        }
        let x = a
            .svd(true, true)
            .solve(&b, 1e-12)
            .map_err(|e| Error::param(format!("calibration solve failed: {e}")))?;
        for (col, &k) in unknown.iter().enumerate() {
            solution[k] = x[col];
        }
        for k in 0..8 {
            if let Some(v) = pinned[k] {
                solution[k] = v;
            }
        }
        let low: Vec<usize> = unknown.iter().copied().filter(|&k| solution[k] < MIN_COST).collect();
        if low.is_empty() {
            break;
        }
        for k in low {
            pinned[k] = Some(MIN_COST);
            solution[k] = MIN_COST;
        }
    }

    let costs = ComponentCosts::new(solution)?;
    let fitted = targets
        .iter()
        .map(|t| Ok((*t, estimate(t.design, t.n, &costs)?.relative_pct)))
        .collect::<Result<Vec<_>>>()?;
    let rms_residual =
        (fitted.iter().map(|(t, p)| (p - t.relative_pct).powi(2)).sum::<f64>() / fitted.len() as f64).sqrt();
    Ok(Calibration {
        costs,
        fitted,
        rms_residual,
    })
}
