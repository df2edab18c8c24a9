//! Entropies in bits and purification.

use crate::error::{check_probability, Error, Result};
use crate::matcore::eigen::{eig_hermitian, eigvals_hermitian};
use crate::matcore::matrix::{ComplexMatrix, C64, ZERO};
use crate::states::DensityOperator;

/// Eigenvalues in `[-clamp_tolerance(n), 0]` are treated as rounding noise.
pub fn clamp_tolerance(n: usize) -> f64 {
    1e-9 * n as f64
}

/// Allowed deviation of a state's trace from one.
pub const TRACE_TOLERANCE: f64 = 1e-9;

/// `η(x) = −x log₂ x` with `η(0) = 0`.
pub fn eta(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy `h(x)` in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_probability("x", x)?;
    Ok(h(x))
}

/// Binary entropy for arguments already known to lie in `[0, 1]`.
pub(crate) fn h(x: f64) -> f64 {
    eta(x) + eta(1.0 - x)
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| eta(p)).sum()
}

/// Entropy of a spectrum, clamping small negative eigenvalues to zero.
///
/// `dim` sets the clamp tolerance. Eigenvalues below `-clamp_tolerance(dim)`
/// are rejected.
pub fn spectrum_entropy(eigs: &[f64], dim: usize) -> Result<f64> {
    let tol = clamp_tolerance(dim);
    let mut s = 0.0;
    for &l in eigs {
        if l < -tol {
            return Err(Error::NotAState(format!("eigenvalue {l:e} below -{tol:e}")));
        }
        s += eta(l);
    }
    Ok(s)
}

/// Von Neumann entropy of a Hermitian unit-trace matrix, in bits.
pub fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    let t = m.trace();
    if (t.re - 1.0).abs() > TRACE_TOLERANCE || t.im.abs() > TRACE_TOLERANCE {
        return Err(Error::NotAState(format!("trace {t} is not 1")));
    }
    spectrum_entropy(&eigvals_hermitian(m)?, m.rows())
}

/// Von Neumann entropy `S(ρ) = −Σ λ log₂ λ`, in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    matrix_entropy(rho.matrix())
}

/// A purification of `rho` on `H ⊗ H_E` with `dim H_E = rank(rho)`.
///
/// Returns the vector together with the environment dimension. The rank
/// counts eigenvalues above `1e-14 · dim`.
pub fn purify(rho: &DensityOperator) -> Result<(Vec<C64>, usize)> {
    let m = rho.matrix();
    let n = m.rows();
    let (vals, vecs) = eig_hermitian(m)?;
    if let Some(&l) = vals.last() {
        if l < -clamp_tolerance(n) {
            return Err(Error::NotAState(format!("eigenvalue {l:e} is negative")));
        }
    }
    let cut = 1e-14 * n as f64;
    let kept: Vec<usize> = (0..n).filter(|&k| vals[k] > cut).collect();
    let rank = kept.len().max(1);
    let mut psi = vec![ZERO; n * rank];
    for (e, &k) in kept.iter().enumerate() {
        let w = vals[k].sqrt();
        for i in 0..n {
            psi[i * rank + e] = vecs[(i, k)] * w;
        }
    }
    Ok((psi, rank))
}
