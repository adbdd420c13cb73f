//! Echo state network benchmark.
//!
//! A fixed random reservoir `X(t) = f(W_in [1; u(t)] + W X(t-1))` with a
//! ridge-regression readout, driven by logistic-map, Mackey-Glass and NARMA
//! series. The harness sweeps activation functions and reservoir sizes,
//! scores one-step and free-running forecasts by logNMSE, and compares
//! reconstructed attractors with an exact Wasserstein distance.

pub mod activation;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod readout;
pub mod reservoir;
pub mod rng;
pub mod timeseries;

pub use error::{Error, Result};
