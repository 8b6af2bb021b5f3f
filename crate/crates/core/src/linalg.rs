//! Small dense complex matrices used throughout the crate.
//!
//! Basis ordering for multi-qubit states is big-endian: the first tensor
//! factor is the most significant bit, so for two qubits the basis is
//! |00>, |01>, |10>, |11> with the first qubit Alice's.

use nalgebra::{DMatrix, Matrix2, Matrix4, SMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type Mat2 = Matrix2<Complex64>;
pub type Mat4 = Matrix4<Complex64>;
pub type Mat8 = SMatrix<Complex64, 8, 8>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn sigma_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

pub fn hadamard() -> Mat2 {
    let h = c(std::f64::consts::FRAC_1_SQRT_2);
    Mat2::new(h, h, h, -h)
}

pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff<const R: usize, const C: usize>(
    a: &SMatrix<Complex64, R, C>,
    b: &SMatrix<Complex64, R, C>,
) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest elementwise deviation from Hermiticity.
pub fn hermiticity_error<const N: usize>(m: &SMatrix<Complex64, N, N>) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues<const N: usize>(m: &SMatrix<Complex64, N, N>) -> Vec<f64> {
    let herm = (m + m.adjoint()) * c(0.5);
    let herm = DMatrix::from_column_slice(N, N, herm.as_slice());
    let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_eigenvalue<const N: usize>(m: &SMatrix<Complex64, N, N>) -> f64 {
    hermitian_eigenvalues(m)[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (sigma_x(), sigma_y(), sigma_z());
        assert!(max_abs_diff(&(x * y), &(z * I)) < 1e-15);
        assert!(max_abs_diff(&(y * z), &(x * I)) < 1e-15);
        assert!(max_abs_diff(&(x * x), &Mat2::identity()) < 1e-15);
    }

    #[test]
    fn kron_matches_nalgebra() {
        let a = sigma_y() + hadamard();
        let b = sigma_x() * c(0.3) + sigma_z();
        assert!(max_abs_diff(&kron2(&a, &b), &a.kronecker(&b)) < 1e-15);
    }

    #[test]
    fn eigenvalues_of_projector() {
        let p = kron2(&Mat2::new(ONE, ZERO, ZERO, ZERO), &Mat2::identity()) * c(0.5);
        let ev = hermitian_eigenvalues(&p);
        assert!((ev[0]).abs() < 1e-15 && (ev[3] - 0.5).abs() < 1e-15);
    }
}
