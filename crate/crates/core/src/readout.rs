//! Linear readout `y = W_out [1; u; x]` trained by ridge regression.

use log::warn;
use nalgebra::{Cholesky, DMatrix};

use crate::error::{Error, Result};

pub const DEFAULT_LAMBDA: f64 = 1e-8;

/// Largest regularisation the solver escalates to when the factorisation fails.
pub const MAX_LAMBDA: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutWeights {
    /// `D_y × (1 + D_u + D_x)`
    pub w_out: DMatrix<f64>,
    /// Regularisation actually used; larger than requested if the solve escalated.
    pub lambda: f64,
}

/// Builds the feature row `[1; u; x]`.
pub fn features(u: &[f64], x: &[f64]) -> Vec<f64> {
    let mut row = Vec::with_capacity(1 + u.len() + x.len());
    row.push(1.0);
    row.extend_from_slice(u);
    row.extend_from_slice(x);
    row
}

/// Solves `(FᵀF + λI) W_outᵀ = FᵀY` by Cholesky.
///
/// If the factorisation fails for `λ > 0`, λ is raised tenfold (up to
/// [`MAX_LAMBDA`]) and the solve retried.
pub fn fit(features: &DMatrix<f64>, targets: &DMatrix<f64>, lambda: f64) -> Result<ReadoutWeights> {
    if features.nrows() == 0 {
        return Err(Error::EmptySequence);
    }
    if targets.nrows() != features.nrows() {
        return Err(Error::Dimension {
            what: "target rows",
            expected: features.nrows(),
            got: targets.nrows(),
        });
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Config(format!("lambda must be >= 0, got {lambda}")));
    }

    let gram = features.tr_mul(features);
    let rhs = features.tr_mul(targets);
    let p = gram.nrows();

    let mut lam = lambda;
    loop {
        let mut a = gram.clone();
        for i in 0..p {
            a[(i, i)] += lam;
        }
        let max_diag = (0..p).map(|i| a[(i, i)]).fold(0.0, f64::max);
        // pivots at rounding level mean the system is numerically singular
        let floor = p as f64 * f64::EPSILON * max_diag;
        if let Some(chol) = Cholesky::new(a).filter(|c| c.l_dirty().diagonal().iter().all(|d| d * d > floor)) {
            let w_t = chol.solve(&rhs);
            if w_t.iter().all(|v| v.is_finite()) {
                return Ok(ReadoutWeights {
                    w_out: w_t.transpose(),
                    lambda: lam,
                });
            }
        }
        let next = lam * 10.0;
        if lam == 0.0 || next > MAX_LAMBDA * (1.0 + 1e-9) {
            return Err(Error::Singular { lambda: lam });
        }
        warn!("ridge solve failed at lambda = {lam:e}; retrying with {next:e}");
        lam = next;
    }
}

impl ReadoutWeights {
    pub fn output_dim(&self) -> usize {
        self.w_out.nrows()
    }

    pub fn feature_dim(&self) -> usize {
        self.w_out.ncols()
    }

    /// `W_out [1; u; x]`.
    pub fn predict(&self, u: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let cols = 1 + u.len() + x.len();
        if cols != self.feature_dim() {
            return Err(Error::Dimension {
                what: "readout features (1 + D_u + D_x)",
                expected: self.feature_dim(),
                got: cols,
            });
        }
        Ok((0..self.output_dim())
            .map(|r| {
                let row = self.w_out.row(r);
                let mut acc = row[0];
                for (k, v) in u.iter().chain(x).enumerate() {
                    acc += row[k + 1] * v;
                }
                acc
            })
            .collect())
    }

    /// Applies the readout to every row of a feature matrix.
    pub fn predict_rows(&self, features: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if features.ncols() != self.feature_dim() {
            return Err(Error::Dimension {
                what: "readout features (1 + D_u + D_x)",
                expected: self.feature_dim(),
                got: features.ncols(),
            });
        }
        Ok(features * self.w_out.transpose())
    }
}
