//! Benchmark series generators and dataset assembly.

use std::fmt;

use log::debug;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Delay of the Mackey-Glass recurrence.
pub const MG_DELAY: usize = 17;
/// Steps discarded after the random initial history.
pub const MG_TRANSIENT: usize = 1000;
/// `|y|` above which a NARMA run counts as diverged.
pub const NARMA_BOUND: f64 = 1e3;
pub const NARMA_MAX_ATTEMPTS: usize = 100_000;

/// Which Mackey-Glass discretisation to iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MgVariant {
    /// `y(t+1) = 0.2 y(t-17) / (1 + y(t-17))^10 - 0.1 y(t)`
    #[default]
    #[serde(alias = "paper")]
    PaperVerbatim,
    /// `y(t+1) = y(t) + 0.2 y(t-17) / (1 + y(t-17)^10) - 0.1 y(t)`
    Standard,
}

impl fmt::Display for MgVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MgVariant::PaperVerbatim => "paper_verbatim",
            MgVariant::Standard => "standard",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NarmaOrder {
    #[serde(rename = "10")]
    Ten,
    #[serde(rename = "20")]
    Twenty,
}

impl NarmaOrder {
    pub fn value(self) -> usize {
        match self {
            NarmaOrder::Ten => 10,
            NarmaOrder::Twenty => 20,
        }
    }

    pub fn from_value(n: usize) -> Result<Self> {
        match n {
            10 => Ok(NarmaOrder::Ten),
            20 => Ok(NarmaOrder::Twenty),
            _ => Err(Error::InvalidSeries(format!("NARMA order must be 10 or 20, got {n}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Logistic,
    MackeyGlass(MgVariant),
    Narma(NarmaOrder),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub length: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Normal,
    FreeRunning,
}

/// Window lengths. `test` is the free-running horizon for [`Task::FreeRunning`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub washout: usize,
    pub train: usize,
    pub test: usize,
}

impl Default for Split {
    fn default() -> Self {
        Self {
            washout: 100,
            train: 2000,
            test: 1000,
        }
    }
}

impl Split {
    pub fn total(&self) -> usize {
        self.washout + self.train + self.test
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<Vec<f64>>,
    pub washout: usize,
    pub train_len: usize,
    pub test_len: usize,
    pub task: Task,
    /// Offset between the input index and target index in the raw series.
    pub lag: usize,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn train_range(&self) -> std::ops::Range<usize> {
        self.washout..self.washout + self.train_len
    }

    pub fn test_range(&self) -> std::ops::Range<usize> {
        let start = self.washout + self.train_len;
        start..start + self.test_len
    }
}

/// Logistic map `x(t+1) = 4 x(t) (1 - x(t))`, starting from `x0`.
pub fn gen_logistic(x0: f64, length: usize) -> Result<Vec<f64>> {
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::InvalidSeries(format!("logistic x0 must lie in (0, 1), got {x0}")));
    }
    let mut s = Vec::with_capacity(length);
    let mut x = x0;
    for _ in 0..length {
        s.push(x);
        x = 4.0 * x * (1.0 - x);
    }
    Ok(s)
}

/// Logistic orbit with `x0` drawn from the seed. Starting points whose orbit
/// lands on 0 or 1 within `length` steps are redrawn.
pub fn gen_logistic_seeded(seed: u64, length: usize) -> Result<Vec<f64>> {
    let mut rng = rng::seeded(seed);
    loop {
        let x0: f64 = rng.random();
        if x0 <= 0.0 {
            continue;
        }
        let s = gen_logistic(x0, length)?;
        if s.iter().all(|&x| x > 0.0 && x < 1.0) {
            return Ok(s);
        }
        debug!("logistic orbit from {x0} left (0, 1); redrawing");
    }
}

/// One Mackey-Glass update from the delayed value `lagged = y(t-17)` and `current = y(t)`.
pub fn mackey_glass_step(variant: MgVariant, lagged: f64, current: f64) -> f64 {
    match variant {
        MgVariant::PaperVerbatim => 0.2 * lagged / (1.0 + lagged).powi(10) - 0.1 * current,
        MgVariant::Standard => current + 0.2 * lagged / (1.0 + lagged.powi(10)) - 0.1 * current,
    }
}

/// Iterates Mackey-Glass from an explicit history (oldest first; the last
/// element is `y(t)`). Returns `length` new values, history excluded.
pub fn gen_mackey_glass_from_history(
    variant: MgVariant,
    history: &[f64],
    length: usize,
) -> Result<Vec<f64>> {
    let need = MG_DELAY + 1;
    if history.len() < need {
        return Err(Error::SeriesTooShort {
            needed: need - 1,
            have: history.len(),
        });
    }
    let mut buf: Vec<f64> = history[history.len() - need..].to_vec();
    buf.reserve(length);
    for _ in 0..length {
        let t = buf.len() - 1;
        let next = mackey_glass_step(variant, buf[t - MG_DELAY], buf[t]);
        buf.push(next);
    }
    Ok(buf.split_off(need))
}

/// Mackey-Glass with 18 history values drawn from U[0.1, 1.3] and the first
/// [`MG_TRANSIENT`] generated steps discarded.
pub fn gen_mackey_glass(variant: MgVariant, length: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = rng::seeded(seed);
    let history: Vec<f64> = (0..=MG_DELAY).map(|_| rng.random_range(0.1..=1.3)).collect();
    let mut s = gen_mackey_glass_from_history(variant, &history, MG_TRANSIENT + length)?;
    Ok(s.split_off(MG_TRANSIENT))
}

/// Runs the NARMA recurrence on a given input sequence, with zero initial
/// history (`y(t) = 0` for `t < n`). Returns `None` if `|y|` exceeds
/// [`NARMA_BOUND`] or becomes non-finite.
///
/// `y(t) = 0.3 y(t-1) + 0.05 y(t-1) Σ_{i=1..n} y(t-i) + 1.5 u(t-n) u(t-1) + 0.1`,
/// passed through tanh for n = 20.
pub fn narma_from_input(order: NarmaOrder, u: &[f64]) -> Option<Vec<f64>> {
    let n = order.value();
    let mut y = vec![0.0; u.len()];
    // running window sum of y(t-n..t-1)
    let mut window = 0.0;
    for t in n..u.len() {
        let prev = y[t - 1];
        let v = 0.3 * prev + 0.05 * prev * window + 1.5 * u[t - n] * u[t - 1] + 0.1;
        let v = match order {
            NarmaOrder::Ten => v,
            NarmaOrder::Twenty => v.tanh(),
        };
        if !v.is_finite() || v.abs() > NARMA_BOUND {
            return None;
        }
        y[t] = v;
        window += v - y[t - n];
    }
    Some(y)
}

/// NARMA series driven by u ~ U[-1, 1]. Diverging draws are discarded and a
/// fresh input sequence is drawn from the same stream.
pub fn gen_narma(order: NarmaOrder, length: usize, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = order.value();
    if length <= n {
        return Err(Error::SeriesTooShort { needed: n, have: length });
    }
    let mut rng = rng::seeded(seed);
    for attempt in 0..NARMA_MAX_ATTEMPTS {
        let u: Vec<f64> = (0..length).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if let Some(y) = narma_from_input(order, &u) {
            if attempt > 0 {
                debug!("NARMA{n} seed {seed}: accepted after {attempt} restarts");
            }
            return Ok((u, y));
        }
    }
    Err(Error::NarmaDiverged {
        order: n,
        attempts: NARMA_MAX_ATTEMPTS,
    })
}

/// Pairs `inputs[k] = s[k]`, `targets[k] = s[k + lag]`.
pub fn lagged_pairs(series: &[f64], lag: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if series.len() <= lag {
        return Err(Error::SeriesTooShort {
            needed: lag,
            have: series.len(),
        });
    }
    let n = series.len() - lag;
    Ok((series[..n].to_vec(), series[lag..].to_vec()))
}

/// Input lag used for each series kind and task.
pub fn input_lag(kind: SeriesKind, task: Task) -> Result<usize> {
    match (kind, task) {
        (SeriesKind::Logistic, Task::Normal) => Ok(1),
        (SeriesKind::MackeyGlass(_), Task::Normal) => Ok(10),
        (SeriesKind::MackeyGlass(_), Task::FreeRunning) => Ok(1),
        (SeriesKind::Narma(_), Task::Normal) => Ok(0),
        (kind, Task::FreeRunning) => Err(Error::InvalidSeries(format!(
            "free-running prediction is only defined for Mackey-Glass, not {kind:?}"
        ))),
    }
}

/// Generates the series for `kind` and pairs it into a dataset of exactly
/// `split.total()` samples.
pub fn make_dataset(kind: SeriesKind, task: Task, split: Split, seed: u64) -> Result<Dataset> {
    let lag = input_lag(kind, task)?;
    let n = split.total();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let (inputs, targets) = match kind {
        SeriesKind::Logistic => lagged_pairs(&gen_logistic_seeded(seed, n + lag)?, lag)?,
        SeriesKind::MackeyGlass(v) => lagged_pairs(&gen_mackey_glass(v, n + lag, seed)?, lag)?,
        SeriesKind::Narma(order) => gen_narma(order, n, seed)?,
    };
    Ok(Dataset {
        inputs: inputs.into_iter().map(|v| vec![v]).collect(),
        targets: targets.into_iter().map(|v| vec![v]).collect(),
        washout: split.washout,
        train_len: split.train,
        test_len: split.test,
        task,
        lag,
    })
}

impl SeriesSpec {
    /// Raw series for inspection: one or two named columns.
    pub fn generate(&self) -> Result<Vec<(&'static str, Vec<f64>)>> {
        match self.kind {
            SeriesKind::Logistic => Ok(vec![("x", gen_logistic_seeded(self.seed, self.length)?)]),
            SeriesKind::MackeyGlass(v) => Ok(vec![("y", gen_mackey_glass(v, self.length, self.seed)?)]),
            SeriesKind::Narma(order) => {
                let (u, y) = gen_narma(order, self.length, self.seed)?;
                Ok(vec![("u", u), ("y", y)])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn logistic_examples() {
        assert_eq!(gen_logistic(0.5, 4).unwrap(), vec![0.5, 1.0, 0.0, 0.0]);
        assert!(gen_logistic(0.75, 50).unwrap().iter().all(|&x| x == 0.75));
        let s = gen_logistic(0.2, 3).unwrap();
        assert_abs_diff_eq!(s[1], 0.64, epsilon = 1e-15);
        assert_abs_diff_eq!(s[2], 0.9216, epsilon = 1e-15);
    }

    #[test]
    fn logistic_rejects_bad_x0() {
        for x0 in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(gen_logistic(x0, 10).is_err());
        }
    }

    #[test]
    fn seeded_logistic_stays_in_unit_interval() {
        for seed in 0..20 {
            let s = gen_logistic_seeded(seed, 5000).unwrap();
            assert!(s.iter().all(|&x| (0.0..=1.0).contains(&x)));
            assert_eq!(s, gen_logistic_seeded(seed, 5000).unwrap());
        }
    }

    #[test]
    fn mackey_glass_steps() {
        assert_abs_diff_eq!(
            mackey_glass_step(MgVariant::PaperVerbatim, 1.0, 1.0),
            -0.0998046875,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(mackey_glass_step(MgVariant::Standard, 1.0, 1.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn mackey_glass_zero_history_is_fixed() {
        for v in [MgVariant::PaperVerbatim, MgVariant::Standard] {
            let s = gen_mackey_glass_from_history(v, &[0.0; 18], 100).unwrap();
            assert!(s.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn mackey_glass_uses_lag_17() {
        let mut h = vec![0.0; 18];
        h[0] = 1.0; // y(t-17)
        h[17] = 1.0; // y(t)
        let s = gen_mackey_glass_from_history(MgVariant::PaperVerbatim, &h, 1).unwrap();
        assert_abs_diff_eq!(s[0], -0.0998046875, epsilon = 1e-15);
    }

    #[test]
    fn mackey_glass_needs_history() {
        assert!(matches!(
            gen_mackey_glass_from_history(MgVariant::Standard, &[0.5; 17], 10),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn standard_mackey_glass_is_bounded_and_deterministic() {
        let s = gen_mackey_glass(MgVariant::Standard, 3000, 8).unwrap();
        assert_eq!(s.len(), 3000);
        assert!(s.iter().all(|&x| x > 0.0 && x < 2.0));
        assert_eq!(s, gen_mackey_glass(MgVariant::Standard, 3000, 8).unwrap());
    }

    #[test]
    fn narma_examples() {
        let u = vec![0.0; 30];
        let y = narma_from_input(NarmaOrder::Ten, &u).unwrap();
        assert!(y[..10].iter().all(|&v| v == 0.0));
        assert_abs_diff_eq!(y[10], 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(y[11], 0.1305, epsilon = 1e-15);

        let y = narma_from_input(NarmaOrder::Twenty, &u).unwrap();
        assert_abs_diff_eq!(y[20], 0.1f64.tanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(y[20], 0.09966799, epsilon = 1e-8);
    }

    #[test]
    fn narma_window_sum_matches_direct_sum() {
        let mut rng = rng::seeded(1);
        let u: Vec<f64> = (0..200).map(|_| rng.random_range(0.0..0.5)).collect();
        let y = narma_from_input(NarmaOrder::Ten, &u).unwrap();
        for t in 10..200 {
            let sum: f64 = (1..=10).map(|i| y[t - i]).sum();
            let v = 0.3 * y[t - 1] + 0.05 * y[t - 1] * sum + 1.5 * u[t - 10] * u[t - 1] + 0.1;
            assert_abs_diff_eq!(y[t], v, epsilon = 1e-12);
        }
    }

    #[test]
    fn narma_order_validation() {
        assert!(NarmaOrder::from_value(15).is_err());
        assert_eq!(NarmaOrder::from_value(20).unwrap(), NarmaOrder::Twenty);
        assert!(gen_narma(NarmaOrder::Ten, 10, 0).is_err());
    }

    #[test]
    fn narma_inputs_and_bounds() {
        let (u, y) = gen_narma(NarmaOrder::Twenty, 100_000, 3).unwrap();
        assert!(u.iter().all(|&v| (-1.0..=1.0).contains(&v)));
        let mut deciles = [0usize; 10];
        for &v in &u {
            deciles[(((v + 1.0) / 0.2) as usize).min(9)] += 1;
        }
        for c in deciles {
            let frac = c as f64 / u.len() as f64;
            assert!((0.05..=0.15).contains(&frac), "decile fraction {frac}");
        }
        assert!(y.iter().all(|&v| v > -1.0 && v < 1.0));
    }

    #[test]
    fn narma10_restarts_until_bounded() {
        let (u, y) = gen_narma(NarmaOrder::Ten, 3100, 5).unwrap();
        assert_eq!(u.len(), 3100);
        assert!(y.iter().all(|v| v.abs() <= NARMA_BOUND));
        assert_eq!((u, y), gen_narma(NarmaOrder::Ten, 3100, 5).unwrap());
    }

    #[test]
    fn lagged_pairs_alignment() {
        let (i, t) = lagged_pairs(&[1.0, 2.0, 3.0, 4.0, 5.0], 1).unwrap();
        assert_eq!(i, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(t, vec![2.0, 3.0, 4.0, 5.0]);
        assert!(lagged_pairs(&[1.0; 10], 10).is_err());
    }

    #[test]
    fn dataset_lags_reproduce_raw_series() {
        let split = Split {
            washout: 10,
            train: 50,
            test: 20,
        };
        let mg = SeriesKind::MackeyGlass(MgVariant::Standard);
        let d = make_dataset(mg, Task::Normal, split, 4).unwrap();
        assert_eq!(d.len(), 80);
        assert_eq!(d.lag, 10);
        let raw = gen_mackey_glass(MgVariant::Standard, 90, 4).unwrap();
        for k in 0..d.len() {
            assert_eq!(d.inputs[k][0], raw[k]);
            assert_eq!(d.targets[k][0], raw[k + 10]);
        }

        let d = make_dataset(mg, Task::FreeRunning, split, 4).unwrap();
        assert_eq!(d.lag, 1);
        for k in 1..d.len() {
            assert_eq!(d.inputs[k][0], d.targets[k - 1][0]);
        }

        let d = make_dataset(SeriesKind::Logistic, Task::Normal, split, 4).unwrap();
        let raw = gen_logistic_seeded(4, 81).unwrap();
        for k in 0..d.len() {
            assert_eq!(d.inputs[k][0], raw[k]);
            assert_eq!(d.targets[k][0], raw[k + 1]);
        }

        let d = make_dataset(SeriesKind::Narma(NarmaOrder::Ten), Task::Normal, split, 4).unwrap();
        let (u, y) = gen_narma(NarmaOrder::Ten, 80, 4).unwrap();
        assert_eq!(d.lag, 0);
        for k in 0..d.len() {
            assert_eq!(d.inputs[k][0], u[k]);
            assert_eq!(d.targets[k][0], y[k]);
        }
        assert_eq!(d.train_range(), 10..60);
        assert_eq!(d.test_range(), 60..80);
    }

    #[test]
    fn free_running_only_for_mackey_glass() {
        assert!(make_dataset(SeriesKind::Logistic, Task::FreeRunning, Split::default(), 0).is_err());
        assert!(make_dataset(SeriesKind::Narma(NarmaOrder::Ten), Task::FreeRunning, Split::default(), 0).is_err());
    }
}
