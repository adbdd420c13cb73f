use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CloudSource {
    Target,
    Predicted,
    Surrogate,
}

impl CloudSource {
    pub fn as_str(self) -> &'static str {
        match self {
            CloudSource::Target => "target",
            CloudSource::Predicted => "predicted",
            CloudSource::Surrogate => "surrogate",
        }
    }
}

/// Delay-coordinate point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractorCloud {
    pub points: Vec<Vec<f64>>,
    pub tau: usize,
    pub dim: usize,
    pub source: CloudSource,
}

impl AttractorCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Point `k` is `(s[k], s[k + tau], …, s[k + (d-1) tau])`.
pub fn embed(series: &[f64], tau: usize, dim: usize, source: CloudSource) -> Result<AttractorCloud> {
    if tau == 0 || dim == 0 {
        return Err(Error::Config(format!(
            "embedding needs tau >= 1 and dim >= 1, got tau = {tau}, dim = {dim}"
        )));
    }
    let span = (dim - 1) * tau;
    if series.len() <= span {
        return Err(Error::SeriesTooShort {
            needed: span,
            have: series.len(),
        });
    }
    let points = (0..series.len() - span)
        .map(|k| (0..dim).map(|j| series[k + j * tau]).collect())
        .collect();
    Ok(AttractorCloud {
        points,
        tau,
        dim,
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_delay() {
        let c = embed(&[1.0, 2.0, 3.0, 4.0], 1, 2, CloudSource::Target).unwrap();
        assert_eq!(c.points, vec![vec![1.0, 2.0], vec![2.0, 3.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn delay_two() {
        let c = embed(&[1.0, 2.0, 3.0, 4.0], 2, 2, CloudSource::Target).unwrap();
        assert_eq!(c.points, vec![vec![1.0, 3.0], vec![2.0, 4.0]]);
    }

    #[test]
    fn constant_series() {
        let c = embed(&[0.7; 50], 17, 3, CloudSource::Surrogate).unwrap();
        assert_eq!(c.len(), 50 - 34);
        assert!(c.points.iter().all(|p| p == &vec![0.7; 3]));
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            embed(&[1.0, 2.0], 2, 2, CloudSource::Target),
            Err(Error::SeriesTooShort { .. })
        ));
        assert!(embed(&[1.0, 2.0], 0, 2, CloudSource::Target).is_err());
    }
}
