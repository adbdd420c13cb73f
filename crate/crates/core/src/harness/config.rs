use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::activation::Registry;
use crate::error::{Error, Result};
use crate::readout::DEFAULT_LAMBDA;
use crate::reservoir::DEFAULT_SPECTRAL_RADIUS;
use crate::timeseries::{MgVariant, NarmaOrder, SeriesKind, Split, Task, MG_DELAY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    #[default]
    Logistic,
    MgeNormal,
    MgeFreeRunning,
    Narma10,
    Narma20,
}

impl TaskKind {
    pub const ALL: [TaskKind; 5] = [
        TaskKind::Logistic,
        TaskKind::MgeNormal,
        TaskKind::MgeFreeRunning,
        TaskKind::Narma10,
        TaskKind::Narma20,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::Logistic => "logistic",
            TaskKind::MgeNormal => "mge_normal",
            TaskKind::MgeFreeRunning => "mge_free_running",
            TaskKind::Narma10 => "narma10",
            TaskKind::Narma20 => "narma20",
        }
    }

    pub fn task(self) -> Task {
        match self {
            TaskKind::MgeFreeRunning => Task::FreeRunning,
            _ => Task::Normal,
        }
    }

    pub fn series(self, variant: MgVariant) -> SeriesKind {
        match self {
            TaskKind::Logistic => SeriesKind::Logistic,
            TaskKind::MgeNormal | TaskKind::MgeFreeRunning => SeriesKind::MackeyGlass(variant),
            TaskKind::Narma10 => SeriesKind::Narma(NarmaOrder::Ten),
            TaskKind::Narma20 => SeriesKind::Narma(NarmaOrder::Twenty),
        }
    }

    pub fn uses_mackey_glass(self) -> bool {
        matches!(self, TaskKind::MgeNormal | TaskKind::MgeFreeRunning)
    }

    /// 0.01 for one-step tasks, 0.1 for free-running.
    pub fn default_sigma(self) -> f64 {
        match self.task() {
            Task::Normal => 0.01,
            Task::FreeRunning => 0.1,
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TaskKind::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| {
                let valid: Vec<_> = TaskKind::ALL.iter().map(|t| t.as_str()).collect();
                Error::Config(format!("unknown task `{s}`; valid tasks: {}", valid.join(", ")))
            })
    }
}

pub const DEFAULT_SIZES: [usize; 6] = [25, 50, 100, 200, 400, 800];

/// Sweep configuration, loadable from JSON. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: TaskKind,
    pub activations: Vec<String>,
    pub sizes: Vec<usize>,
    /// Falls back to [`TaskKind::default_sigma`].
    pub sigma: Option<f64>,
    pub trials: usize,
    pub lambda: f64,
    pub spectral_radius: f64,
    pub washout: usize,
    pub train_len: usize,
    /// Teacher-forced evaluation window for one-step tasks.
    pub test_len: usize,
    /// Free-running steps scored by logNMSE.
    pub horizon: usize,
    /// Free-running steps generated for the attractor comparison (≥ horizon).
    pub attractor_len: usize,
    pub seed: u64,
    pub mge_variant: MgVariant,
    pub embed_dim: usize,
    /// Falls back to 17 for Mackey-Glass and 1 otherwise.
    pub embed_tau: Option<usize>,
    pub wasserstein_m: usize,
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses every available core.
    pub workers: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            task: TaskKind::default(),
            activations: Registry::standard().names().map(str::to_string).collect(),
            sizes: DEFAULT_SIZES.to_vec(),
            sigma: None,
            trials: 25,
            lambda: DEFAULT_LAMBDA,
            spectral_radius: DEFAULT_SPECTRAL_RADIUS,
            washout: 100,
            train_len: 2000,
            test_len: 1000,
            horizon: 300,
            attractor_len: 1000,
            seed: 0,
            mge_variant: MgVariant::default(),
            embed_dim: 2,
            embed_tau: None,
            wasserstein_m: 400,
            out_dir: PathBuf::from("out"),
            workers: None,
        }
    }
}

impl ExperimentConfig {
    pub fn for_task(task: TaskKind) -> Self {
        Self {
            task,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma.unwrap_or_else(|| self.task.default_sigma())
    }

    pub fn embed_tau(&self) -> usize {
        self.embed_tau.unwrap_or(if self.task.uses_mackey_glass() { MG_DELAY } else { 1 })
    }

    pub fn split(&self) -> Split {
        let test = match self.task.task() {
            Task::Normal => self.test_len,
            Task::FreeRunning => self.horizon.max(self.attractor_len),
        };
        Split {
            washout: self.washout,
            train: self.train_len,
            test,
        }
    }

    pub fn validate(&self, registry: &Registry) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        if self.trials > u32::MAX as usize {
            return bad(format!("trials must be < 2^32, got {}", self.trials));
        }
        if self.sizes.is_empty() {
            return bad("sizes must be non-empty".into());
        }
        if let Some(s) = self.sizes.iter().find(|&&s| s == 0 || s >= 1 << 24) {
            return bad(format!("reservoir size {s} out of range [1, 2^24)"));
        }
        if self.activations.is_empty() {
            return bad("activations must be non-empty".into());
        }
        for (i, name) in self.activations.iter().enumerate() {
            let idx = registry.index_of(name)?;
            if idx > u8::MAX as usize {
                return bad(format!("activation `{name}` has registry index {idx} > 255"));
            }
            if self.activations[..i].contains(name) {
                return bad(format!("activation `{name}` listed twice"));
            }
        }
        let mut sorted = self.sizes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.sizes.len() {
            return bad("sizes contain duplicates".into());
        }
        let sigma = self.sigma();
        if !(sigma > 0.0 && sigma.is_finite()) {
            return bad(format!("sigma must be positive, got {sigma}"));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be >= 0, got {}", self.lambda));
        }
        if !(self.spectral_radius > 0.0 && self.spectral_radius.is_finite()) {
            return bad(format!("spectral_radius must be positive, got {}", self.spectral_radius));
        }
        if self.train_len == 0 {
            return bad("train_len must be >= 1".into());
        }
        match self.task.task() {
            Task::Normal => {
                if self.test_len < 2 {
                    return bad("test_len must be >= 2".into());
                }
            }
            Task::FreeRunning => {
                if self.horizon < 2 {
                    return bad("horizon must be >= 2".into());
                }
                if self.embed_dim == 0 || self.embed_tau() == 0 {
                    return bad("embed_dim and embed_tau must be >= 1".into());
                }
                if self.wasserstein_m == 0 {
                    return bad("wasserstein_m must be >= 1".into());
                }
                let span = (self.embed_dim - 1) * self.embed_tau();
                let points = self.split().test.saturating_sub(span);
                if points < self.wasserstein_m {
                    return bad(format!(
                        "attractor window of {} steps embeds to {points} points, fewer than wasserstein_m = {}",
                        self.split().test,
                        self.wasserstein_m
                    ));
                }
            }
        }
        if let Some(0) = self.workers {
            return bad("workers must be >= 1".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.trials, 25);
        assert_eq!(cfg.lambda, 1e-8);
        assert_eq!(cfg.activations.len(), 10);
        assert_eq!(cfg.sigma(), 0.01);
        assert_eq!(ExperimentConfig::for_task(TaskKind::MgeFreeRunning).sigma(), 0.1);
        assert_eq!(ExperimentConfig::for_task(TaskKind::MgeNormal).embed_tau(), 17);
        assert_eq!(ExperimentConfig::for_task(TaskKind::Narma10).embed_tau(), 1);
        cfg.validate(&Registry::standard()).unwrap();
        ExperimentConfig::for_task(TaskKind::MgeFreeRunning)
            .validate(&Registry::standard())
            .unwrap();
    }

    #[test]
    fn json_round_trip_and_partial() {
        let cfg = ExperimentConfig::from_json(
            r#"{"task": "mge_free_running", "activations": ["sinc", "tanh"], "sizes": [50], "mge_variant": "standard"}"#,
        )
        .unwrap();
        assert_eq!(cfg.task, TaskKind::MgeFreeRunning);
        assert_eq!(cfg.mge_variant, MgVariant::Standard);
        assert_eq!(cfg.trials, 25);
        let back = ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        let paper = ExperimentConfig::from_json(r#"{"mge_variant": "paper"}"#).unwrap();
        assert_eq!(paper.mge_variant, MgVariant::PaperVerbatim);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ExperimentConfig::from_json(r#"{"task": "logistic", "leak_rate": 0.3}"#).unwrap_err();
        assert!(err.to_string().contains("leak_rate"));
    }

    #[test]
    fn validation_failures() {
        let reg = Registry::standard();
        let base = ExperimentConfig::default();
        let cases = [
            ExperimentConfig { trials: 0, ..base.clone() },
            ExperimentConfig { sizes: vec![], ..base.clone() },
            ExperimentConfig { sizes: vec![10, 10], ..base.clone() },
            ExperimentConfig { activations: vec!["relu".into()], ..base.clone() },
            ExperimentConfig { sigma: Some(-1.0), ..base.clone() },
            ExperimentConfig { lambda: -1.0, ..base.clone() },
            ExperimentConfig {
                task: TaskKind::MgeFreeRunning,
                attractor_len: 300,
                ..base.clone()
            },
        ];
        for cfg in cases {
            assert!(cfg.validate(&reg).is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn unknown_activation_lists_valid_names() {
        let cfg = ExperimentConfig {
            activations: vec!["softplus".into()],
            ..Default::default()
        };
        let msg = cfg.validate(&Registry::standard()).unwrap_err().to_string();
        assert!(msg.contains("softplus") && msg.contains("sinc"));
    }

    #[test]
    fn task_parse() {
        assert_eq!("narma20".parse::<TaskKind>().unwrap(), TaskKind::Narma20);
        assert!("narma30".parse::<TaskKind>().is_err());
    }
}
