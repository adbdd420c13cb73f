//! Prediction error, delay embeddings, surrogates and attractor distances.

mod assignment;
mod embed;
mod nmse;
mod surrogate;
mod wasserstein;

pub use assignment::{solve_assignment, TransportPlan};
pub use embed::{embed, AttractorCloud, CloudSource};
pub use nmse::{log_nmse, LOG_NMSE_BASE, LOG_NMSE_PERFECT};
pub use surrogate::shuffle_surrogate;
pub use wasserstein::{cost_matrix, wasserstein, wasserstein_exact};
