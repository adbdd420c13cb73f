//! Independent reference computations used to check the library.
#![allow(dead_code)]

use esn_bench::rng;
use nalgebra::DMatrix;
use rand::Rng;

/// Minimum assignment cost by enumerating every permutation (Heap's algorithm).
/// Costs are summed in row order.
pub fn brute_force_assignment(cost: &DMatrix<f64>) -> f64 {
    let n = cost.nrows();
    let mut perm: Vec<usize> = (0..n).collect();
    let total = |p: &[usize]| p.iter().enumerate().map(|(r, &c)| cost[(r, c)]).sum::<f64>();
    let mut best = total(&perm);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(total(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

pub fn brute_force_w1(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let cost = DMatrix::from_fn(a.len(), b.len(), |i, j| {
        a[i].iter().zip(&b[j]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
    });
    brute_force_assignment(&cost) / a.len() as f64
}

/// Spectral radius by Gelfand's formula, ρ = lim ‖M^k‖^(1/k), with k = 2^squarings
/// and renormalisation after every squaring.
pub fn gelfand_radius(m: &DMatrix<f64>, squarings: u32) -> f64 {
    let mut a = m.clone();
    let mut log_rho = 0.0;
    let mut weight = 1.0;
    for _ in 0..squarings {
        let s = a.norm();
        if s == 0.0 {
            return 0.0;
        }
        a /= s;
        log_rho += weight * s.ln();
        a = &a * &a;
        weight *= 0.5;
    }
    log_rho += weight * a.norm().ln();
    log_rho.exp()
}

/// Ridge solution via the Moore–Penrose pseudo-inverse of the augmented
/// system `[F; √λ I] W = [Y; 0]` (SVD based).
pub fn ridge_pinv(f: &DMatrix<f64>, y: &DMatrix<f64>, lambda: f64) -> DMatrix<f64> {
    let (t, p) = f.shape();
    let mut aug = DMatrix::zeros(t + p, p);
    aug.view_mut((0, 0), (t, p)).copy_from(f);
    for i in 0..p {
        aug[(t + i, i)] = lambda.sqrt();
    }
    let mut rhs = DMatrix::zeros(t + p, y.ncols());
    rhs.view_mut((0, 0), (t, y.ncols())).copy_from(y);
    let pinv = aug.pseudo_inverse(1e-14).expect("svd");
    (pinv * rhs).transpose()
}

pub fn relative_error(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Random ridge instance: `T ≤ 20` rows, at most 5 features and 5 outputs.
pub fn random_instance(seed: u64) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut rng = rng::seeded(seed);
    let p = rng.random_range(1..=5);
    let t = rng.random_range(p..=20);
    let dy = rng.random_range(1..=5);
    let f = DMatrix::from_fn(t, p, |_, _| rng.random_range(-2.0..2.0));
    let y = DMatrix::from_fn(t, dy, |_, _| rng.random_range(-2.0..2.0));
    (f, y)
}
