//! Spectral routines backed by nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matcore::matrix::{ComplexMatrix, C64};

/// Hermiticity tolerance for an `n x n` input, max-entry norm.
pub fn hermitian_tolerance(n: usize) -> f64 {
    1e-9 * n as f64
}

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

fn checked_hermitian(m: &ComplexMatrix) -> Result<DMatrix<C64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let tolerance = hermitian_tolerance(m.rows());
    let deviation = m.hermiticity_error();
    if deviation > tolerance {
        return Err(Error::NotHermitian { deviation, tolerance });
    }
    Ok(to_nalgebra(&m.hermitian_part()))
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in descending order and the matching unitary whose
/// columns are eigenvectors, so that `m = V diag(λ) V†`. Inputs within the
/// hermiticity tolerance are symmetrized first.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let h = checked_hermitian(m)?;
    let n = h.nrows();
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let h = checked_hermitian(m)?;
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(*eigvals_hermitian(m)?.last().expect("non-empty spectrum"))
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Trace norm `‖m‖₁`, the sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Operator norm, the largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (vals, v) = eig_hermitian(m)?;
    let n = vals.len();
    let mut scaled = v.clone();
    for j in 0..n {
        let s = f(vals[j]);
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    Ok(scaled.mul_adjoint(&v))
}

/// Matrix absolute value `|m|` of a Hermitian matrix.
pub fn matrix_abs(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    hermitian_function(m, f64::abs)
}

/// Unitary check: `‖U†U − I‖_max ≤ tol`.
pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    u.is_square() && u.adjoint_mul(u).max_abs_diff(&ComplexMatrix::identity(u.rows())) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::dims::swap_operator;
    use crate::random::{random_hermitian, random_matrix};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_spectrum_sorted() {
        let (vals, _) = eig_hermitian(&ComplexMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(vals, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn swap_spectrum() {
        let vals = eigvals_hermitian(&swap_operator(2)).unwrap();
        let expected = [1.0, 1.0, 1.0, -1.0];
        for (a, b) in vals.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn symmetrizes_within_tolerance() {
        let mut m = ComplexMatrix::from_diag(&[1.0, 2.0]);
        m[(0, 1)] = C64::new(1e-12, 0.0);
        assert!(eig_hermitian(&m).is_ok());
    }

    #[test]
    fn norms_of_diagonals() {
        assert!((trace_norm(&ComplexMatrix::from_diag(&[1.0, -2.0])) - 3.0).abs() < 1e-14);
        assert!((operator_norm(&ComplexMatrix::from_diag(&[1.0, -3.0])) - 3.0).abs() < 1e-14);
        assert!((operator_norm(&ComplexMatrix::identity(4)) - 1.0).abs() < 1e-14);
        let c = C64::new(0.6, -0.8) * 2.5;
        assert!((operator_norm(&ComplexMatrix::identity(3).scale_c(c)) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_pure_states_at_distance_two() {
        let a = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = ComplexMatrix::projector(&[C64::new(s, 0.0), C64::new(s, 0.0)]);
        let minus = ComplexMatrix::projector(&[C64::new(s, 0.0), C64::new(-s, 0.0)]);
        assert!((trace_norm(&(&a - &ComplexMatrix::from_diag(&[0.0, 1.0]))) - 2.0).abs() < 1e-12);
        assert!((trace_norm(&(&plus - &minus)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn matrix_abs_of_swap_is_identity() {
        let a = matrix_abs(&swap_operator(3)).unwrap();
        assert!(a.max_abs_diff(&ComplexMatrix::identity(9)) < 1e-12);
    }

    #[test]
    fn row_major_layout_survives_conversion() {
        let m = ComplexMatrix::from_real(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let n = to_nalgebra(&m);
        assert_eq!(n[(0, 2)], C64::new(3.0, 0.0));
        assert_eq!(n[(1, 0)], C64::new(4.0, 0.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn reconstruction(seed in any::<u64>(), n in 1usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_hermitian(&mut rng, n);
            let (vals, v) = eig_hermitian(&m).unwrap();
            prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(is_unitary(&v, 1e-10));
            let rec = hermitian_function(&m, |x| x).unwrap();
            prop_assert!(rec.max_abs_diff(&m) < 1e-10 * n as f64);
        }

        #[test]
        fn trace_norm_multiplicative(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, 2, 2);
            let b = random_matrix(&mut rng, 3, 3);
            let lhs = trace_norm(&a.kron(&b));
            prop_assert!((lhs - trace_norm(&a) * trace_norm(&b)).abs() < 1e-9);
        }

        #[test]
        fn hermitian_trace_norm_is_abs_eigen_sum(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_hermitian(&mut rng, 5);
            let s: f64 = eigvals_hermitian(&m).unwrap().iter().map(|x| x.abs()).sum();
            prop_assert!((trace_norm(&m) - s).abs() < 1e-10);
        }
    }
}
