use std::collections::BTreeMap;

use super::run::TrialRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct MedianRow {
    pub activation: String,
    pub size: usize,
    pub median: f64,
    pub trials: usize,
    pub diverged: usize,
}

/// Median of `values` under the IEEE total order, so `+∞` sorts last.
/// Even counts average the two middle values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

/// Median logNMSE per `(activation, size)`, ordered by registry index then size.
pub fn aggregate(records: &[TrialRecord]) -> Vec<MedianRow> {
    let mut groups: BTreeMap<(usize, usize), (&str, Vec<f64>, usize)> = BTreeMap::new();
    for r in records {
        let entry = groups
            .entry((r.activation_index, r.size))
            .or_insert_with(|| (r.activation.as_str(), Vec::new(), 0));
        entry.1.push(r.log_nmse);
        entry.2 += r.diverged as usize;
    }
    groups
        .into_iter()
        .map(|((_, size), (name, values, diverged))| MedianRow {
            activation: name.to_string(),
            size,
            median: median(&values).expect("group is non-empty"),
            trials: values.len(),
            diverged,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::TaskKind;

    #[test]
    fn median_examples() {
        assert_eq!(median(&[1.0, 2.0, 100.0]), Some(2.0));
        assert_eq!(median(&[-4.2]), Some(-4.2));
        assert_eq!(median(&[-3.0, f64::INFINITY, -2.5]), Some(-2.5));
        assert_eq!(median(&[1.0, 3.0]), Some(2.0));
        assert_eq!(median(&[]), None);
    }

    fn record(activation: &str, index: usize, size: usize, trial: usize, v: f64) -> TrialRecord {
        TrialRecord {
            task: TaskKind::Logistic,
            activation: activation.into(),
            activation_index: index,
            size,
            trial,
            seed: 0,
            data_seed: 0,
            log_nmse: v,
            teacher_forced_log_nmse: None,
            diverged: v == f64::INFINITY,
            sigma: 0.01,
            lambda: 1e-8,
            lambda_used: 1e-8,
            spectral_radius: 0.95,
            washout: 100,
            train_len: 2000,
            eval_len: 1000,
            mge_variant: None,
            wall_ms: 0.0,
        }
    }

    #[test]
    fn groups_by_activation_and_size() {
        let recs = vec![
            record("sinc", 2, 100, 0, -3.0),
            record("tanh", 0, 100, 0, -1.0),
            record("sinc", 2, 100, 1, f64::INFINITY),
            record("sinc", 2, 100, 2, -2.5),
            record("tanh", 0, 50, 0, -0.5),
        ];
        let rows = aggregate(&recs);
        let keys: Vec<_> = rows.iter().map(|r| (r.activation.as_str(), r.size)).collect();
        assert_eq!(keys, vec![("tanh", 50), ("tanh", 100), ("sinc", 100)]);
        assert_eq!(rows[2].median, -2.5);
        assert_eq!(rows[2].trials, 3);
        assert_eq!(rows[2].diverged, 1);
    }
}
