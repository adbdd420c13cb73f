//! Fixed random reservoir and its state update
//! `X(t) = f(W_in [1; u(t)] + W X(t-1))`.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

use crate::activation::ActivationFn;
use crate::error::{Error, Result};
use crate::rng;

pub const DEFAULT_SPECTRAL_RADIUS: f64 = 0.95;

#[derive(Debug, Clone)]
pub struct ReservoirConfig {
    pub size: usize,
    pub input_dim: usize,
    /// Standard deviation of the N(0, σ²) weight initialisation.
    pub sigma: f64,
    pub spectral_radius: f64,
    pub seed: u64,
    pub activation: ActivationFn,
}

impl ReservoirConfig {
    pub fn new(size: usize, sigma: f64, seed: u64, activation: ActivationFn) -> Self {
        Self {
            size,
            input_dim: 1,
            sigma,
            spectral_radius: DEFAULT_SPECTRAL_RADIUS,
            seed,
            activation,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::InvalidReservoir("size must be >= 1".into()));
        }
        if self.input_dim == 0 {
            return Err(Error::InvalidReservoir("input_dim must be >= 1".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidReservoir(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !(self.spectral_radius > 0.0 && self.spectral_radius.is_finite()) {
            return Err(Error::InvalidReservoir(format!(
                "spectral radius target must be positive, got {}",
                self.spectral_radius
            )));
        }
        Ok(())
    }
}

/// Largest eigenvalue modulus of a square matrix, complex eigenvalues included.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Dimension {
            what: "spectral_radius (columns)",
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if let Some((index, &value)) = m.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Domain { index, value });
    }
    if m.is_empty() {
        return Ok(0.0);
    }
    Ok(m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone)]
pub struct Reservoir {
    w_in: DMatrix<f64>,
    w: DMatrix<f64>,
    state: DVector<f64>,
    activation: ActivationFn,
    steps: usize,
    // scratch for the pre-activation
    pre: DVector<f64>,
}

impl Reservoir {
    /// Samples `W_in` then `W` (row-major, i.i.d. N(0, σ²)) and rescales `W`
    /// to the target spectral radius.
    pub fn build(cfg: &ReservoirConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = rng::seeded(cfg.seed);
        let mut draw = |rows: usize, cols: usize| {
            let data: Vec<f64> = (0..rows * cols)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    cfg.sigma * z
                })
                .collect();
            DMatrix::from_row_slice(rows, cols, &data)
        };
        let w_in = draw(cfg.size, 1 + cfg.input_dim);
        let w = draw(cfg.size, cfg.size);
        Self::with_scaled_recurrent(w_in, w, cfg.spectral_radius, cfg.activation.clone())
    }

    /// Uses the given weights, rescaling `w` so its spectral radius equals `target`.
    pub fn with_scaled_recurrent(
        w_in: DMatrix<f64>,
        w: DMatrix<f64>,
        target: f64,
        activation: ActivationFn,
    ) -> Result<Self> {
        let rho = spectral_radius(&w)?;
        if rho == 0.0 {
            return Err(Error::ZeroSpectralRadius);
        }
        Self::from_weights(w_in, w * (target / rho), activation)
    }

    /// Uses the given weights verbatim.
    pub fn from_weights(
        w_in: DMatrix<f64>,
        w: DMatrix<f64>,
        activation: ActivationFn,
    ) -> Result<Self> {
        let size = w.nrows();
        if !w.is_square() {
            return Err(Error::Dimension {
                what: "recurrent matrix columns",
                expected: size,
                got: w.ncols(),
            });
        }
        if w_in.nrows() != size {
            return Err(Error::Dimension {
                what: "input matrix rows",
                expected: size,
                got: w_in.nrows(),
            });
        }
        if w_in.ncols() < 2 {
            return Err(Error::Dimension {
                what: "input matrix columns (1 + input_dim)",
                expected: 2,
                got: w_in.ncols(),
            });
        }
        Ok(Self {
            w_in,
            w,
            state: DVector::zeros(size),
            activation,
            steps: 0,
            pre: DVector::zeros(size),
        })
    }

    pub fn size(&self) -> usize {
        self.w.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.w_in.ncols() - 1
    }

    pub fn input_weights(&self) -> &DMatrix<f64> {
        &self.w_in
    }

    pub fn recurrent_weights(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn activation(&self) -> &ActivationFn {
        &self.activation
    }

    pub fn state(&self) -> &[f64] {
        self.state.as_slice()
    }

    pub fn set_state(&mut self, x: &[f64]) -> Result<()> {
        if x.len() != self.size() {
            return Err(Error::Dimension {
                what: "state",
                expected: self.size(),
                got: x.len(),
            });
        }
        self.state.copy_from_slice(x);
        Ok(())
    }

    /// Zeroes the state and the step counter.
    pub fn reset(&mut self) {
        self.state.fill(0.0);
        self.steps = 0;
    }

    /// Advances one step with input `u` and returns the new state.
    pub fn step(&mut self, u: &[f64]) -> Result<&[f64]> {
        if u.len() != self.input_dim() {
            return Err(Error::Dimension {
                what: "input",
                expected: self.input_dim(),
                got: u.len(),
            });
        }
        if let Some((index, &value)) = u.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Domain { index, value });
        }
        let step = self.steps;
        self.steps += 1;

        // pre = W x + W_in [1; u]
        self.pre.gemv(1.0, &self.w, &self.state, 0.0);
        for i in 0..self.size() {
            let mut acc = self.w_in[(i, 0)];
            for (k, uk) in u.iter().enumerate() {
                acc += self.w_in[(i, k + 1)] * uk;
            }
            self.pre[i] += acc;
        }
        if self.pre.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step });
        }
        self.activation.apply_unchecked(self.pre.as_mut_slice());
        if self.pre.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step });
        }
        std::mem::swap(&mut self.state, &mut self.pre);
        Ok(self.state.as_slice())
    }

    /// Resets, drives the reservoir with every input, and returns the states
    /// for `t >= washout` as rows (row `k` is the state after input `washout + k`).
    pub fn harvest<I: AsRef<[f64]>>(&mut self, inputs: &[I], washout: usize) -> Result<DMatrix<f64>> {
        if inputs.is_empty() {
            return Err(Error::EmptySequence);
        }
        if washout >= inputs.len() {
            return Err(Error::Washout {
                washout,
                len: inputs.len(),
            });
        }
        self.reset();
        let n = self.size();
        let mut states = DMatrix::zeros(inputs.len() - washout, n);
        for (t, u) in inputs.iter().enumerate() {
            let x = self.step(u.as_ref())?;
            if t >= washout {
                let mut row = states.row_mut(t - washout);
                for (dst, src) in row.iter_mut().zip(x) {
                    *dst = *src;
                }
            }
        }
        Ok(states)
    }
}
