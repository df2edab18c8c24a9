use crate::error::{Error, Result};
use crate::matcore::eigen::{hermitian_tolerance, min_eigenvalue, trace_norm};
use crate::matcore::entropy::{clamp_tolerance, TRACE_TOLERANCE};
use crate::matcore::{
    partial_trace, partial_transpose, permute_subsystems, permuted_dims, ComplexMatrix,
    SubsystemDims, C64,
};

/// A Hermitian, positive semidefinite, unit-trace matrix with tensor-factor
/// dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: SubsystemDims,
}

impl DensityOperator {
    /// Validates and symmetrizes `matrix`.
    pub fn new(matrix: ComplexMatrix, dims: SubsystemDims) -> Result<Self> {
        dims.check_square(&matrix)?;
        let n = matrix.rows();
        let deviation = matrix.hermiticity_error();
        let tolerance = hermitian_tolerance(n);
        if deviation > tolerance {
            return Err(Error::NotHermitian { deviation, tolerance });
        }
        let matrix = matrix.hermitian_part();
        let t = matrix.trace().re;
        if (t - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::NotAState(format!("trace {t} is not 1")));
        }
        let low = min_eigenvalue(&matrix)?;
        if low < -clamp_tolerance(n) {
            return Err(Error::NotAState(format!("eigenvalue {low:e} is negative")));
        }
        Ok(Self { matrix, dims })
    }

    /// Wraps a matrix known to be a state, skipping validation.
    pub fn new_unchecked(matrix: ComplexMatrix, dims: SubsystemDims) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        Self { matrix, dims }
    }

    /// `|ψ><ψ|` for a unit vector `ψ`.
    pub fn pure(psi: &[C64], dims: SubsystemDims) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::NotAState(format!("vector has squared norm {norm}")));
        }
        if psi.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for factors {:?}",
                psi.len(),
                dims.factors()
            )));
        }
        Ok(Self::new_unchecked(ComplexMatrix::projector(psi), dims))
    }

    pub fn maximally_mixed(dims: SubsystemDims) -> Self {
        let n = dims.total();
        Self::new_unchecked(ComplexMatrix::identity(n).scale(1.0 / n as f64), dims)
    }

    /// Computational basis state `|k><k|`.
    pub fn basis(k: usize, dims: SubsystemDims) -> Self {
        let n = dims.total();
        Self::new_unchecked(ComplexMatrix::unit(n, n, k, k), dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Same matrix, new factorization of the same total dimension.
    pub fn with_dims(self, dims: SubsystemDims) -> Result<Self> {
        dims.check_square(&self.matrix)?;
        Ok(Self { matrix: self.matrix, dims })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self::new_unchecked(self.matrix.kron(&other.matrix), self.dims.concat(&other.dims))
    }

    /// Marginal on the subsystems not in `traced`.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<Self> {
        let m = partial_trace(&self.matrix, &self.dims, traced)?;
        Ok(Self::new_unchecked(m, self.dims.without(traced)?))
    }

    /// Marginal on the listed subsystems, in their original order.
    pub fn reduce_to(&self, kept: &[usize]) -> Result<Self> {
        self.dims.check_indices(kept)?;
        let traced: Vec<usize> = (0..self.dims.len()).filter(|k| !kept.contains(k)).collect();
        self.partial_trace(&traced)
    }

    pub fn partial_transpose(&self, transposed: &[usize]) -> Result<ComplexMatrix> {
        partial_transpose(&self.matrix, &self.dims, transposed)
    }

    /// Reorders the tensor factors; factor `k` of the result is factor
    /// `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let m = permute_subsystems(&self.matrix, &self.dims, perm)?;
        Ok(Self::new_unchecked(m, permuted_dims(&self.dims, perm)?))
    }

    /// Unhalved trace distance `‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "states of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(trace_norm(&(&self.matrix - &other.matrix)))
    }

    /// Convex combination `Σ p_i ρ_i` of states with identical dims.
    pub fn mixture(weights: &[f64], states: &[&Self]) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::NotAState("empty mixture".into()))?;
        let mut m = ComplexMatrix::zeros(first.dim(), first.dim());
        for (&w, s) in weights.iter().zip(states) {
            if s.dims != first.dims {
                return Err(Error::DimensionMismatch("mixture of unequal dims".into()));
            }
            m.add_scaled_assign(&s.matrix, C64::new(w, 0.0));
        }
        Self::new(m, first.dims.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let d = SubsystemDims::single(2);
        assert!(DensityOperator::new(ComplexMatrix::identity(2), d.clone()).is_err());
        assert!(DensityOperator::new(ComplexMatrix::from_diag(&[1.5, -0.5]), d.clone()).is_err());
        let mut m = ComplexMatrix::from_diag(&[0.5, 0.5]);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(
            DensityOperator::new(m, d.clone()),
            Err(Error::NotHermitian { .. })
        ));
        assert!(DensityOperator::new(ComplexMatrix::identity(3).scale(1.0 / 3.0), d).is_err());
    }

    #[test]
    fn marginals_and_permutation() {
        let a = DensityOperator::basis(0, SubsystemDims::single(2));
        let b = DensityOperator::maximally_mixed(SubsystemDims::single(3));
        let ab = a.tensor(&b);
        assert_eq!(ab.reduce_to(&[0]).unwrap().matrix(), a.matrix());
        let ba = ab.permute(&[1, 0]).unwrap();
        assert_eq!(ba.dims().factors(), &[3, 2]);
        assert!(ba.matrix().max_abs_diff(&b.tensor(&a).into_matrix()) < 1e-15);
    }

    #[test]
    fn distance_between_basis_states() {
        let d = SubsystemDims::single(3);
        let a = DensityOperator::basis(0, d.clone());
        let b = DensityOperator::basis(2, d);
        assert!((a.trace_distance(&b).unwrap() - 2.0).abs() < 1e-12);
    }
}
