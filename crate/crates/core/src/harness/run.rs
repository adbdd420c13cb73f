use std::time::Instant;

use log::{debug, info, warn};
use nalgebra::DMatrix;
use rayon::prelude::*;

use super::aggregate::{aggregate, MedianRow};
use super::config::{ExperimentConfig, TaskKind};
use crate::activation::{ActivationFn, Registry};
use crate::error::{Error, Result};
use crate::metrics::{self, CloudSource, LOG_NMSE_BASE};
use crate::readout::{self, ReadoutWeights};
use crate::reservoir::{Reservoir, ReservoirConfig};
use crate::rng::mix64;
use crate::timeseries::{make_dataset, Dataset, MgVariant, Task};

const DATA_TAG: u64 = 0xD1B5_4A32_D192_ED03;

pub const PREDICTED_VS_TARGET: &str = "predicted_vs_target";
pub const SURROGATE_VS_TARGET: &str = "surrogate_vs_target";

/// Reservoir seed for one `(activation, size, trial)` cell. Injective in the
/// tuple for `activation < 2^8`, `size < 2^24`, `trial < 2^32`.
pub fn trial_seed(base: u64, activation_index: usize, size: usize, trial: usize) -> u64 {
    let packed = (activation_index as u64) << 56 | (size as u64) << 32 | trial as u64;
    mix64(base ^ mix64(packed))
}

/// Series seed for a trial. Shared by every activation and size so that
/// they are compared on the same data.
pub fn data_seed(base: u64, trial: usize) -> u64 {
    mix64(mix64(base) ^ DATA_TAG ^ trial as u64)
}

/// One `(task, activation, size, trial)` outcome with enough metadata to rerun it.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub task: TaskKind,
    pub activation: String,
    pub activation_index: usize,
    pub size: usize,
    pub trial: usize,
    pub seed: u64,
    pub data_seed: u64,
    pub log_nmse: f64,
    /// Free-running tasks only: one-step logNMSE of the same trained model over
    /// the same horizon, with true inputs at every step.
    pub teacher_forced_log_nmse: Option<f64>,
    pub diverged: bool,
    pub sigma: f64,
    pub lambda: f64,
    pub lambda_used: f64,
    pub spectral_radius: f64,
    pub washout: usize,
    pub train_len: usize,
    pub eval_len: usize,
    /// `None` for series other than Mackey-Glass.
    pub mge_variant: Option<MgVariant>,
    pub wall_ms: f64,
}

impl TrialRecord {
    pub fn log_base(&self) -> u32 {
        LOG_NMSE_BASE
    }

    fn key(&self) -> (usize, usize, usize) {
        (self.activation_index, self.size, self.trial)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WassersteinRow {
    pub pair: &'static str,
    pub distance: f64,
    pub m: usize,
    pub seed: u64,
}

/// Free-running series and attractor comparison for one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeRunArtifacts {
    pub activation: String,
    pub activation_index: usize,
    pub size: usize,
    pub trial: usize,
    pub target: Vec<f64>,
    /// Empty if the reservoir diverged before the closed loop started.
    pub predicted: Vec<f64>,
    pub surrogate: Vec<f64>,
    pub wasserstein: Vec<WassersteinRow>,
}

impl FreeRunArtifacts {
    pub fn distance(&self, pair: &str) -> Option<f64> {
        self.wasserstein.iter().find(|r| r.pair == pair).map(|r| r.distance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub records: Vec<TrialRecord>,
    pub medians: Vec<MedianRow>,
    pub free_running: Vec<FreeRunArtifacts>,
}

impl ExperimentResult {
    pub fn all_diverged(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.diverged)
    }

    pub fn median(&self, activation: &str, size: usize) -> Option<f64> {
        self.medians
            .iter()
            .find(|m| m.activation == activation && m.size == size)
            .map(|m| m.median)
    }
}

struct Job {
    activation: ActivationFn,
    activation_index: usize,
    size: usize,
    trial: usize,
}

struct TrialOutput {
    record: TrialRecord,
    artifacts: Option<FreeRunArtifacts>,
}

#[allow(clippy::large_enum_variant)]
enum Fit {
    Ok {
        reservoir: Reservoir,
        weights: ReadoutWeights,
        /// `[1; u; x]` rows for every harvested step after the washout.
        features: DMatrix<f64>,
    },
    Diverged,
}

/// Runs a one-step (teacher-forced) sweep.
pub fn run_normal_task(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if cfg.task.task() != Task::Normal {
        return Err(Error::Config(format!("{} is not a one-step task", cfg.task)));
    }
    run(cfg)
}

/// Runs a closed-loop Mackey-Glass sweep.
pub fn run_free_running_task(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if cfg.task.task() != Task::FreeRunning {
        return Err(Error::Config(format!("{} is not a free-running task", cfg.task)));
    }
    run(cfg)
}

pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_with_registry(cfg, &Registry::standard())
}

/// Runs every `(activation, size, trial)` cell of the sweep, in parallel.
/// Records come back sorted by (registry index, size, trial).
pub fn run_with_registry(cfg: &ExperimentConfig, registry: &Registry) -> Result<ExperimentResult> {
    cfg.validate(registry)?;
    let mut jobs = Vec::new();
    for name in &cfg.activations {
        let activation = registry.get(name)?.clone();
        let activation_index = registry.index_of(name)?;
        for &size in &cfg.sizes {
            for trial in 0..cfg.trials {
                jobs.push(Job {
                    activation: activation.clone(),
                    activation_index,
                    size,
                    trial,
                });
            }
        }
    }
    info!(
        "{}: {} trials ({} activations x {} sizes x {})",
        cfg.task,
        jobs.len(),
        cfg.activations.len(),
        cfg.sizes.len(),
        cfg.trials
    );

    let execute = || -> Result<Vec<TrialOutput>> { jobs.par_iter().map(|job| run_trial(cfg, job)).collect() };
    let outputs = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?
            .install(execute)?,
        None => execute()?,
    };

    let mut records = Vec::with_capacity(outputs.len());
    let mut free_running = Vec::new();
    for out in outputs {
        records.push(out.record);
        free_running.extend(out.artifacts);
    }
    records.sort_by_key(TrialRecord::key);
    free_running.sort_by_key(|a| (a.activation_index, a.size, a.trial));
    let medians = aggregate(&records);
    Ok(ExperimentResult {
        records,
        medians,
        free_running,
    })
}

fn run_trial(cfg: &ExperimentConfig, job: &Job) -> Result<TrialOutput> {
    let start = Instant::now();
    let seed = trial_seed(cfg.seed, job.activation_index, job.size, job.trial);
    let dseed = data_seed(cfg.seed, job.trial);
    let split = cfg.split();
    let data = make_dataset(cfg.task.series(cfg.mge_variant), cfg.task.task(), split, dseed)?;

    let rcfg = ReservoirConfig {
        size: job.size,
        input_dim: 1,
        sigma: cfg.sigma(),
        spectral_radius: cfg.spectral_radius,
        seed,
        activation: job.activation.clone(),
    };
    let reservoir = Reservoir::build(&rcfg)?;

    let free = cfg.task.task() == Task::FreeRunning;
    let mut teacher_forced = free.then_some(f64::INFINITY);
    let (log_nmse, lambda_used, artifacts) = match train(reservoir, &data, cfg.lambda)? {
        Fit::Diverged => {
            let artifacts = free
                .then(|| free_run_artifacts(cfg, job, seed, &data, Vec::new()))
                .transpose()?;
            (f64::INFINITY, f64::NAN, artifacts)
        }
        Fit::Ok {
            mut reservoir,
            weights,
            features,
        } => match cfg.task.task() {
            Task::Normal => (evaluate_teacher_forced(&weights, &features, &data)?, weights.lambda, None),
            Task::FreeRunning => {
                let target: Vec<f64> = data.targets[data.test_range()].iter().map(|t| t[0]).collect();
                let forced = teacher_forced_run(reservoir.clone(), &weights, &data, cfg.horizon)?;
                teacher_forced = Some(match forced {
                    Some(p) => metrics::log_nmse(&target[..cfg.horizon], &p)?,
                    None => f64::INFINITY,
                });
                let predicted = free_run(&mut reservoir, &weights, &data)?;
                let horizon = cfg.horizon.min(predicted.len());
                let score = if horizon < cfg.horizon {
                    f64::INFINITY
                } else {
                    metrics::log_nmse(&target[..horizon], &predicted[..horizon])?
                };
                let artifacts = free_run_artifacts(cfg, job, seed, &data, predicted)?;
                (score, weights.lambda, Some(artifacts))
            }
        },
    };

    let record = TrialRecord {
        task: cfg.task,
        activation: job.activation.name().to_string(),
        activation_index: job.activation_index,
        size: job.size,
        trial: job.trial,
        seed,
        data_seed: dseed,
        log_nmse,
        teacher_forced_log_nmse: teacher_forced,
        diverged: log_nmse == f64::INFINITY,
        sigma: cfg.sigma(),
        lambda: cfg.lambda,
        lambda_used,
        spectral_radius: cfg.spectral_radius,
        washout: split.washout,
        train_len: split.train,
        eval_len: match cfg.task.task() {
            Task::Normal => split.test,
            Task::FreeRunning => cfg.horizon,
        },
        mge_variant: cfg.task.uses_mackey_glass().then_some(cfg.mge_variant),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    debug!(
        "{} {} D_x={} trial {}: logNMSE {}",
        record.task, record.activation, record.size, record.trial, record.log_nmse
    );
    Ok(TrialOutput { record, artifacts })
}

/// Teacher-forced pass that fits the readout on the train window.
///
/// One-step tasks drive the reservoir through the test window as well; for
/// free-running tasks the reservoir is left at the end of the train window.
fn train(mut reservoir: Reservoir, data: &Dataset, lambda: f64) -> Result<Fit> {
    let teacher_len = match data.task {
        Task::Normal => data.len(),
        Task::FreeRunning => data.washout + data.train_len,
    };
    let states = match reservoir.harvest(&data.inputs[..teacher_len], data.washout) {
        Ok(s) => s,
        Err(Error::Divergence { step }) => {
            debug!("reservoir diverged at step {step}");
            return Ok(Fit::Diverged);
        }
        Err(e) => return Err(e),
    };
    let features = feature_matrix(&data.inputs[data.washout..teacher_len], &states);
    let f_train = features.rows(0, data.train_len).into_owned();
    let y_train = DMatrix::from_fn(data.train_len, 1, |r, _| data.targets[data.washout + r][0]);
    match readout::fit(&f_train, &y_train, lambda) {
        Ok(weights) => Ok(Fit::Ok {
            reservoir,
            weights,
            features,
        }),
        Err(Error::Singular { lambda }) => {
            warn!("readout solve failed up to lambda = {lambda:e}; recording trial as diverged");
            Ok(Fit::Diverged)
        }
        Err(e) => Err(e),
    }
}

fn feature_matrix(inputs: &[Vec<f64>], states: &DMatrix<f64>) -> DMatrix<f64> {
    let du = inputs[0].len();
    DMatrix::from_fn(states.nrows(), 1 + du + states.ncols(), |r, c| {
        if c == 0 {
            1.0
        } else if c <= du {
            inputs[r][c - 1]
        } else {
            states[(r, c - 1 - du)]
        }
    })
}

fn evaluate_teacher_forced(weights: &ReadoutWeights, features: &DMatrix<f64>, data: &Dataset) -> Result<f64> {
    let test = features.rows(data.train_len, data.test_len).into_owned();
    let predicted = weights.predict_rows(&test)?;
    let target: Vec<f64> = data.targets[data.test_range()].iter().map(|t| t[0]).collect();
    metrics::log_nmse(&target, predicted.column(0).as_slice())
}

/// Closed loop over the test window: the first input is the last true value,
/// after which each prediction becomes the next input. Stops early on a
/// non-finite state or output.
pub(crate) fn free_run(reservoir: &mut Reservoir, weights: &ReadoutWeights, data: &Dataset) -> Result<Vec<f64>> {
    let range = data.test_range();
    let mut input = data.inputs[range.start][0];
    let mut predicted = Vec::with_capacity(range.len());
    for _ in range {
        let x = match reservoir.step(&[input]) {
            Ok(x) => x,
            Err(Error::Divergence { .. }) => break,
            Err(e) => return Err(e),
        };
        let y = weights.predict(&[input], x)?[0];
        if !y.is_finite() {
            break;
        }
        predicted.push(y);
        input = y;
    }
    Ok(predicted)
}

/// One-step predictions over the first `steps` samples of the test window,
/// continuing from the reservoir state at the end of training. `None` on divergence.
fn teacher_forced_run(
    mut reservoir: Reservoir,
    weights: &ReadoutWeights,
    data: &Dataset,
    steps: usize,
) -> Result<Option<Vec<f64>>> {
    let start = data.test_range().start;
    let mut out = Vec::with_capacity(steps);
    for u in &data.inputs[start..start + steps] {
        let x = match reservoir.step(u) {
            Ok(x) => x,
            Err(Error::Divergence { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        out.push(weights.predict(u, x)?[0]);
    }
    Ok(Some(out))
}

fn distance_or_inf(result: Result<f64>) -> Result<f64> {
    match result {
        Err(Error::InvalidCost { .. }) => Ok(f64::INFINITY),
        other => other,
    }
}

fn free_run_artifacts(
    cfg: &ExperimentConfig,
    job: &Job,
    seed: u64,
    data: &Dataset,
    predicted: Vec<f64>,
) -> Result<FreeRunArtifacts> {
    let target: Vec<f64> = data.targets[data.test_range()].iter().map(|t| t[0]).collect();
    let surrogate = metrics::shuffle_surrogate(&target, mix64(seed ^ 1));
    let (dim, tau, m) = (cfg.embed_dim, cfg.embed_tau(), cfg.wasserstein_m);
    let w_seed = mix64(seed ^ 2);

    let target_cloud = metrics::embed(&target, tau, dim, CloudSource::Target)?;
    let surrogate_cloud = metrics::embed(&surrogate, tau, dim, CloudSource::Surrogate)?;
    let predicted_distance = if predicted.len() == target.len() {
        let cloud = metrics::embed(&predicted, tau, dim, CloudSource::Predicted)?;
        distance_or_inf(metrics::wasserstein(&cloud, &target_cloud, m, w_seed))?
    } else {
        f64::INFINITY
    };
    let surrogate_distance = distance_or_inf(metrics::wasserstein(&surrogate_cloud, &target_cloud, m, w_seed))?;

    Ok(FreeRunArtifacts {
        activation: job.activation.name().to_string(),
        activation_index: job.activation_index,
        size: job.size,
        trial: job.trial,
        target,
        predicted,
        surrogate,
        wasserstein: vec![
            WassersteinRow {
                pair: PREDICTED_VS_TARGET,
                distance: predicted_distance,
                m,
                seed: w_seed,
            },
            WassersteinRow {
                pair: SURROGATE_VS_TARGET,
                distance: surrogate_distance,
                m,
                seed: w_seed,
            },
        ],
    })
}
