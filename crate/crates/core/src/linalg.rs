//! Small helpers over dense complex matrices.
//!
//! Everything downstream works with `nalgebra` dynamic matrices over
//! `Complex<f64>`; this module adds the few numerical kernels the rest of the
//! crate needs: operator norms, numerical rank, and a Hermitian pseudo-inverse
//! solve with eigenvalue thresholding.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Inner product linear in the first argument: Σ uᵢ conj(vᵢ).
pub fn inner(u: &CVector, v: &CVector) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Identity matrix of size n.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0f64, |acc, s| acc.max(*s))
}

/// Largest entrywise deviation |a - b| over all entries.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Deviation of m from unitarity: ‖m*·m − I‖_max.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    max_abs_diff(&(m.adjoint() * m), &identity(n))
}

/// Numerical rank: number of singular values above `rel_tol · σ_max`.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().fold(0.0f64, |acc, s| acc.max(*s));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * max).count()
}

/// Dimension of the null space at relative threshold `rel_tol`.
pub fn nullity(m: &CMatrix, rel_tol: f64) -> usize {
    m.ncols() - numerical_rank(m, rel_tol)
}

/// Solves the Hermitian system `a x = b` by eigendecomposition, discarding
/// eigenvalues below `rel_tol · λ_max` (pseudo-inverse in the degenerate
/// directions). Returns the solution and the retained rank.
pub fn hermitian_pinv_solve(a: &CMatrix, b: &CVector, rel_tol: f64) -> (CVector, usize) {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!(b.len(), n);
    let eig = a.clone().symmetric_eigen();
    let lam_max = eig.eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    let thr = rel_tol * lam_max;
    // x = V diag(1/λ on retained) V^H b
    let vt_b = eig.eigenvectors.adjoint() * b;
    let mut rank = 0;
    let mut scaled = CVector::zeros(n);
    for i in 0..n {
        let lam = eig.eigenvalues[i];
        if lam.abs() > thr && lam_max > 0.0 {
            scaled[i] = vt_b[i] / Complex64::new(lam, 0.0);
            rank += 1;
        }
    }
    (&eig.eigenvectors * scaled, rank)
}
