use nalgebra::DMatrix;
use rand::seq::index;

use super::assignment::solve_assignment;
use super::embed::AttractorCloud;
use crate::error::{Error, Result};
use crate::rng;

/// Euclidean distances between every pair of points.
pub fn cost_matrix(a: &[Vec<f64>], b: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(a.len(), b.len(), |i, j| {
        a[i].iter()
            .zip(&b[j])
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt()
    })
}

/// Exact W₁ between two equal-size uniform point sets: the minimum mean
/// matched Euclidean distance over all bijections.
pub fn wasserstein_exact(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            what: "point count",
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptySequence);
    }
    let plan = solve_assignment(&cost_matrix(a, b))?;
    Ok(plan.cost / a.len() as f64)
}

/// W₁ between `m`-point subsamples of two clouds.
///
/// Each cloud is subsampled without replacement by a fresh generator seeded
/// with `seed`, so equal-size clouds get the same index set.
pub fn wasserstein(a: &AttractorCloud, b: &AttractorCloud, m: usize, seed: u64) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::Dimension {
            what: "embedding dimension",
            expected: a.dim,
            got: b.dim,
        });
    }
    for cloud in [a, b] {
        if m > cloud.len() {
            return Err(Error::SubsampleTooLarge {
                m,
                available: cloud.len(),
            });
        }
    }
    let pick = |cloud: &AttractorCloud| -> Vec<Vec<f64>> {
        let mut idx = index::sample(&mut rng::seeded(seed), cloud.len(), m).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| cloud.points[i].clone()).collect()
    };
    wasserstein_exact(&pick(a), &pick(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{embed, CloudSource};
    use approx::assert_abs_diff_eq;

    fn cloud(points: Vec<Vec<f64>>) -> AttractorCloud {
        let dim = points[0].len();
        AttractorCloud {
            points,
            tau: 1,
            dim,
            source: CloudSource::Target,
        }
    }

    #[test]
    fn examples() {
        let series: Vec<f64> = (0..300).map(|t| (t as f64 * 0.3).sin()).collect();
        let a = embed(&series, 3, 2, CloudSource::Target).unwrap();
        assert_eq!(wasserstein(&a, &a, 100, 9).unwrap(), 0.0);

        assert_eq!(wasserstein(&cloud(vec![vec![0.0]]), &cloud(vec![vec![3.0]]), 1, 0).unwrap(), 3.0);

        let a = cloud(vec![vec![0.0], vec![1.0]]);
        let b = cloud(vec![vec![0.5], vec![1.5]]);
        assert_abs_diff_eq!(wasserstein(&a, &b, 2, 0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn errors() {
        let a = cloud(vec![vec![0.0, 1.0]; 5]);
        let b = cloud(vec![vec![0.0]; 5]);
        assert!(matches!(wasserstein(&a, &b, 3, 0), Err(Error::Dimension { .. })));
        assert!(matches!(
            wasserstein(&a, &a, 6, 0),
            Err(Error::SubsampleTooLarge { m: 6, available: 5 })
        ));
    }

    #[test]
    fn symmetric() {
        let mut rng = rng::seeded(21);
        use rand::Rng;
        for _ in 0..20 {
            let a = cloud((0..40).map(|_| vec![rng.random(), rng.random()]).collect());
            let b = cloud((0..40).map(|_| vec![rng.random(), rng.random()]).collect());
            let s = rng.random();
            let ab = wasserstein(&a, &b, 25, s).unwrap();
            let ba = wasserstein(&b, &a, 25, s).unwrap();
            assert!((ab - ba).abs() <= 1e-9);
        }
    }

    #[test]
    fn translation_of_a_cloud_costs_the_shift() {
        let a: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64 * 0.1, (i * i) as f64 * 0.01]).collect();
        let b: Vec<Vec<f64>> = a.iter().map(|p| vec![p[0] + 3.0, p[1] + 4.0]).collect();
        assert_abs_diff_eq!(wasserstein_exact(&a, &b).unwrap(), 5.0, epsilon = 1e-12);
    }
}
