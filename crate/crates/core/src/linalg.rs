//! Dense absorbing-chain solves used by the exact oracles.

use nalgebra::{DMatrix, DVector};

/// Absorption probabilities of a finite chain with `q.len()` transient nodes.
///
/// `q[i]` lists transient moves `(j, p)`, `r[i]` lists absorbing moves `(k, p)` with
/// `k < absorbing`. Returns the absorption distribution when starting in `start`.
pub fn absorption(
    q: &[Vec<(usize, f64)>],
    r: &[Vec<(usize, f64)>],
    absorbing: usize,
    start: usize,
) -> Vec<f64> {
    let n = q.len();
    let mut a = DMatrix::<f64>::identity(n, n);
    for (i, row) in q.iter().enumerate() {
        for &(j, p) in row {
            a[(i, j)] -= p;
        }
    }
    let mut b = DMatrix::<f64>::zeros(n, absorbing);
    for (i, row) in r.iter().enumerate() {
        for &(k, p) in row {
            b[(i, k)] += p;
        }
    }
    let x = a
        .lu()
        .solve(&b)
        .expect("transient part of an absorbing chain is non-singular");
    (0..absorbing).map(|k| x[(start, k)].max(0.0)).collect()
}

/// Solves `(I - Q) v = b` for a substochastic `Q` given in sparse row form.
pub fn solve_transient(q: &[Vec<(usize, f64)>], b: &[f64]) -> Option<Vec<f64>> {
    let n = q.len();
    let mut a = DMatrix::<f64>::identity(n, n);
    for (i, row) in q.iter().enumerate() {
        for &(j, p) in row {
            a[(i, j)] -= p;
        }
    }
    let rhs = DVector::from_column_slice(b);
    a.lu().solve(&rhs).map(|v| v.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_loop() {
        // Stay with 0.5, exit to 0 with 0.2, to 1 with 0.3.
        let q = vec![vec![(0, 0.5)]];
        let r = vec![vec![(0, 0.2), (1, 0.3)]];
        let d = absorption(&q, &r, 2, 0);
        assert!((d[0] - 0.4).abs() < 1e-14);
        assert!((d[1] - 0.6).abs() < 1e-14);
    }

    #[test]
    fn two_step_chain() {
        let q = vec![vec![(1, 1.0)], vec![]];
        let b = vec![0.0, 0.25];
        let v = solve_transient(&q, &b).unwrap();
        assert!((v[0] - 0.25).abs() < 1e-15);
    }
}
