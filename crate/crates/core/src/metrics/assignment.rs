use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    /// `assignment[row] = column`
    pub assignment: Vec<usize>,
    /// Sum of matched costs, accumulated in row order.
    pub cost: f64,
}

/// Minimum-cost perfect matching on a square, non-negative cost matrix
/// (Hungarian method with row/column potentials, O(m³)).
pub fn solve_assignment(cost: &DMatrix<f64>) -> Result<TransportPlan> {
    if !cost.is_square() {
        return Err(Error::Dimension {
            what: "cost matrix columns",
            expected: cost.nrows(),
            got: cost.ncols(),
        });
    }
    for r in 0..cost.nrows() {
        for c in 0..cost.ncols() {
            let v = cost[(r, c)];
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidCost { row: r, col: c, value: v });
            }
        }
    }
    let n = cost.nrows();
    if n == 0 {
        return Ok(TransportPlan {
            assignment: Vec::new(),
            cost: 0.0,
        });
    }

    // 1-based arrays; index 0 is the virtual column holding the row being inserted.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                if cur < min_slack[j] {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        // augment along the alternating path
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[matched_row[j] - 1] = j - 1;
    }
    let total = assignment.iter().enumerate().map(|(r, &c)| cost[(r, c)]).sum();
    Ok(TransportPlan {
        assignment,
        cost: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, data.len() / rows, data)
    }

    #[test]
    fn zero_diagonal_gives_identity() {
        let c = m(3, &[0.0, 5.0, 2.0, 1.0, 0.0, 4.0, 3.0, 7.0, 0.0]);
        let plan = solve_assignment(&c).unwrap();
        assert_eq!(plan.cost, 0.0);
        assert_eq!(plan.assignment, vec![0, 1, 2]);
    }

    #[test]
    fn two_by_two_examples() {
        let plan = solve_assignment(&m(2, &[1.0, 2.0, 2.0, 1.0])).unwrap();
        assert_eq!(plan.cost, 2.0);
        assert_eq!(plan.assignment, vec![0, 1]);

        let plan = solve_assignment(&m(2, &[0.0, 1.0, 0.0, 1.0])).unwrap();
        assert_eq!(plan.cost, 1.0);
        let mut cols = plan.assignment.clone();
        cols.sort();
        assert_eq!(cols, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            solve_assignment(&DMatrix::zeros(2, 3)),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            solve_assignment(&m(2, &[0.0, -1.0, 0.0, 0.0])),
            Err(Error::InvalidCost { row: 0, col: 1, .. })
        ));
        assert!(solve_assignment(&m(1, &[f64::NAN])).is_err());
    }

    #[test]
    fn empty_and_single() {
        assert_eq!(solve_assignment(&DMatrix::zeros(0, 0)).unwrap().cost, 0.0);
        let p = solve_assignment(&m(1, &[3.0])).unwrap();
        assert_eq!((p.assignment, p.cost), (vec![0], 3.0));
    }

    #[test]
    fn assignment_is_a_permutation() {
        let mut rng = crate::rng::seeded(12);
        use rand::Rng;
        for n in [4usize, 17, 60] {
            let c = DMatrix::from_fn(n, n, |_, _| rng.random_range(0.0..10.0));
            let mut cols = solve_assignment(&c).unwrap().assignment;
            cols.sort();
            assert_eq!(cols, (0..n).collect::<Vec<_>>());
        }
    }
}
