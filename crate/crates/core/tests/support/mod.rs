//! Shared helpers for integration tests.

// Index loops mirror the matrix notation here.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use repqec::DensityMatrix;

/// Eigenvalues of a Hermitian matrix via classical Jacobi rotations with
/// largest-pivot selection. Dimension-squared pivot scans keep this O(n^4),
/// which is fine for the register sizes under test.
pub fn hermitian_eigenvalues(mut a: Vec<Vec<Complex64>>) -> Vec<f64> {
    let n = a.len();
    let mut converged = false;
    for _ in 0..500_000 {
        let (mut p, mut q, mut largest) = (0usize, 1usize, 0.0f64);
        for i in 0..n {
            for j in i + 1..n {
                let magnitude = a[i][j].norm();
                if magnitude > largest {
                    largest = magnitude;
                    p = i;
                    q = j;
                }
            }
        }
        if largest < 1e-14 {
            converged = true;
            break;
        }

        // Peel the phase off the pivot so a real rotation can zero it:
        // with u_pp = c, u_pq = -s, u_qp = s e^{-i phi}, u_qq = c e^{-i phi}
        // the update a <- U' a U kills the (p, q) entry.
        let pivot = a[p][q];
        let phase = Complex64::from_polar(1.0, -pivot.arg());
        let theta = 0.5 * (2.0 * pivot.norm()).atan2(a[p][p].re - a[q][q].re);
        let (c, s) = (theta.cos(), theta.sin());
        let u_pp = Complex64::new(c, 0.0);
        let u_pq = Complex64::new(-s, 0.0);
        let u_qp = s * phase;
        let u_qq = c * phase;

        for row in 0..n {
            let (x, y) = (a[row][p], a[row][q]);
            a[row][p] = x * u_pp + y * u_qp;
            a[row][q] = x * u_pq + y * u_qq;
        }
        for col in 0..n {
            let (x, y) = (a[p][col], a[q][col]);
            a[p][col] = u_pp.conj() * x + u_qp.conj() * y;
            a[q][col] = u_pq.conj() * x + u_qq.conj() * y;
        }
    }
    assert!(converged, "Jacobi iteration did not converge");
    (0..n).map(|i| a[i][i].re).collect()
}

pub fn density_matrix_eigenvalues(rho: &DensityMatrix) -> Vec<f64> {
    let dim = rho.dim();
    let a: Vec<Vec<Complex64>> = (0..dim)
        .map(|row| (0..dim).map(|col| rho.get(row, col)).collect())
        .collect();
    hermitian_eigenvalues(a)
}
