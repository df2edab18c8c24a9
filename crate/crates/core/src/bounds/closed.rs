use crate::channels::Channel;
use crate::error::{check_dimension, check_probability, Error, Result};
use crate::matcore::entropy::eta;
use crate::matcore::{matrix_abs, operator_norm, partial_trace, partial_transpose, trace_norm};
use crate::states::DensityOperator;

/// `r_0 = q/(d(d+1)) + (1−q)/(d(d−1))`, `r_1 = q/(d(d+1)) − (1−q)/(d(d−1))`.
pub fn transposition_coefficients(q: f64, d: usize) -> Result<(f64, f64)> {
    check_probability("q", q)?;
    check_dimension("d", d, 2)?;
    let df = d as f64;
    let a = q / (df * (df + 1.0));
    let b = (1.0 - q) / (df * (df - 1.0));
    Ok((a + b, a - b))
}

/// Closed-form transposition bound on `Q(N_{q,d})`:
/// `log₂((d²−1)(r_0 + |r_1|) + |r_0 + d r_1| + |r_1 + d r_0|)`.
pub fn transposition_bound_closed(q: f64, d: usize) -> Result<f64> {
    let (r0, r1) = transposition_coefficients(q, d)?;
    let df = d as f64;
    let s = (df * df - 1.0) * (r0 + r1.abs()) + (r0 + df * r1).abs() + (r1 + df * r0).abs();
    Ok(s.log2())
}

/// Transposition bound for a channel whose Choi state is
/// `q ψ+ ⊗ σ_1 + (1−q) ψ− ⊗ σ_2` with `σ_1 ⊥ σ_2` on `A_0 B_0 = C^d ⊗ C^d`:
/// `log₂(d ‖tr_{B_0}(|(qσ_1 + (1−q)σ_2)^{T_B}| + |(qσ_1 − (1−q)σ_2)^{T_B}|)‖_op)`.
pub fn transposition_bound_general(
    q: f64,
    sigma1: &DensityOperator,
    sigma2: &DensityOperator,
    d: usize,
) -> Result<f64> {
    check_probability("q", q)?;
    check_dimension("d", d, 2)?;
    let (plus, minus) = shield_blocks(q, sigma1, sigma2, d)?;
    let dims = shield_dims(d)?;
    let sum = &matrix_abs(&plus)? + &matrix_abs(&minus)?;
    let reduced = partial_trace(&sum, &dims, &[1])?;
    Ok((d as f64 * operator_norm(&reduced)).log2())
}

pub(crate) fn shield_dims(d: usize) -> Result<crate::matcore::SubsystemDims> {
    crate::matcore::SubsystemDims::new(vec![d, d])
}

/// Partially transposed blocks `(qσ_1 + (1−q)σ_2)^{T_B}` and
/// `(qσ_1 − (1−q)σ_2)^{T_B}` after checking shapes and orthogonality.
pub(crate) fn shield_blocks(
    q: f64,
    sigma1: &DensityOperator,
    sigma2: &DensityOperator,
    d: usize,
) -> Result<(crate::matcore::ComplexMatrix, crate::matcore::ComplexMatrix)> {
    for s in [sigma1, sigma2] {
        if s.dim() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "shield state of dimension {} on C^{d} ⊗ C^{d}",
                s.dim()
            )));
        }
    }
    // only the supports that carry weight need to be orthogonal
    let overlap = sigma1.matrix().inner(sigma2.matrix()).norm();
    if q > 0.0 && q < 1.0 && overlap > 1e-10 {
        return Err(Error::NotOrthogonal(overlap));
    }
    let dims = shield_dims(d)?;
    let (a, b) = (sigma1.matrix(), sigma2.matrix());
    let plus = &a.scale(q) + &b.scale(1.0 - q);
    let minus = &a.scale(q) - &b.scale(1.0 - q);
    Ok((
        partial_transpose(&plus, &dims, &[1])?,
        partial_transpose(&minus, &dims, &[1])?,
    ))
}

/// Upper bound on `Q(D_{p,d})`: zero for `p ≥ d/(2(d+1))`, otherwise
/// `log₂ d + η(1/2) − η(1/2 − (d²−1)p/d²) − (d²−1) η(p/d²)` with
/// `η(x) = −x log₂ x`.
pub fn depolarizing_upper(p: f64, d: usize) -> Result<f64> {
    check_probability("p", p)?;
    check_dimension("d", d, 2)?;
    if p >= depolarizing_breakpoint(d) {
        return Ok(0.0);
    }
    Ok(depolarizing_upper_formula(p, d))
}

/// The case-1 expression of [`depolarizing_upper`] evaluated without the
/// case split.
pub fn depolarizing_upper_formula(p: f64, d: usize) -> f64 {
    let df = d as f64;
    let dd = df * df;
    df.log2() + eta(0.5) - eta(0.5 - (dd - 1.0) * p / dd) - (dd - 1.0) * eta(p / dd)
}

/// `p* = d/(2(d+1))`, where the depolarizing channel becomes
/// anti-degradable.
pub fn depolarizing_breakpoint(d: usize) -> f64 {
    d as f64 / (2.0 * (d as f64 + 1.0))
}

/// `Q(E_{λ,d}) = max{(1 − 2λ) log₂ d, 0}`.
pub fn erasure_capacity(lambda: f64, d: usize) -> Result<f64> {
    check_probability("lambda", lambda)?;
    check_dimension("d", d, 1)?;
    Ok(((1.0 - 2.0 * lambda) * (d as f64).log2()).max(0.0))
}

/// Upper bound `P ≤ (log₂ d_A + Q)/2` on the private capacity. `d_a` is
/// taken as a real number so that large tensor powers can be passed.
pub fn privacy_quantum_tradeoff(d_a: f64, q: f64) -> Result<f64> {
    if !(d_a >= 1.0) {
        return Err(Error::Domain(format!("input dimension {d_a} must be at least 1")));
    }
    if !(q >= 0.0) {
        return Err(Error::Domain(format!("quantum capacity {q} must be nonnegative")));
    }
    Ok((d_a.log2() + q) / 2.0)
}

/// `d_A ‖J_a − J_b‖₁` with normalized Choi states; an upper bound on
/// `‖a − b‖_⋄`.
pub fn diamond_upper_via_choi(a: &Channel, b: &Channel) -> Result<f64> {
    if a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim() {
        return Err(Error::DimensionMismatch(format!(
            "channels {}→{} and {}→{}",
            a.in_dim(),
            a.out_dim(),
            b.in_dim(),
            b.out_dim()
        )));
    }
    let diff = a.choi().matrix() - b.choi().matrix();
    Ok(a.in_dim() as f64 * trace_norm(&diff))
}
