use crate::bounds::closed::{shield_blocks, shield_dims};
use crate::channels::Channel;
use crate::error::{check_dimension, check_probability, Error, Result};
use crate::matcore::eigen::hermitian_tolerance;
use crate::matcore::{
    matrix_abs, min_eigenvalue, operator_norm, partial_trace, partial_transpose,
    permute_subsystems, ComplexMatrix, SubsystemDims,
};
use crate::states::{d_asym, d_sym, max_entangled, sym_asym_projectors, DensityOperator};

/// Feasibility tolerance for witness constraints: minimum eigenvalue
/// `≥ −WITNESS_TOLERANCE · dim`.
pub const WITNESS_TOLERANCE: f64 = 1e-8;

/// Result of checking a witness against a channel. `value` is only a valid
/// bound when `feasible` holds; `min_eigenvalue` is the smallest eigenvalue
/// over all constraint operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessVerdict {
    pub feasible: bool,
    pub value: f64,
    pub min_eigenvalue: f64,
}

/// Feasible point `(Y, Z)` of the transposition-norm SDP, both on `AB` in
/// Choi ordering `[input, output]`.
#[derive(Clone, Debug)]
pub struct TranspositionWitness {
    y: ComplexMatrix,
    z: ComplexMatrix,
}

impl TranspositionWitness {
    pub fn new(y: ComplexMatrix, z: ComplexMatrix) -> Result<Self> {
        if !y.is_square() || y.rows() != z.rows() || !z.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "witness blocks {}x{} and {}x{}",
                y.rows(),
                y.cols(),
                z.rows(),
                z.cols()
            )));
        }
        for m in [&y, &z] {
            check_hermitian(m)?;
            let min = min_eigenvalue(m)?;
            if min < -WITNESS_TOLERANCE * m.rows() as f64 {
                return Err(Error::InvalidMatrix(format!(
                    "witness block has eigenvalue {min:e}"
                )));
            }
        }
        Ok(Self { y, z })
    }

    pub fn y(&self) -> &ComplexMatrix {
        &self.y
    }

    pub fn z(&self) -> &ComplexMatrix {
        &self.z
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.y.scale(s), self.z.scale(s))
    }
}

/// Feasible point `(R, X)` of the β program: `R` on `AB` in Choi ordering,
/// `X` on `B`.
#[derive(Clone, Debug)]
pub struct BetaWitness {
    r: ComplexMatrix,
    x: ComplexMatrix,
}

impl BetaWitness {
    pub fn new(r: ComplexMatrix, x: ComplexMatrix) -> Result<Self> {
        check_hermitian(&r)?;
        check_hermitian(&x)?;
        Ok(Self { r, x })
    }

    pub fn r(&self) -> &ComplexMatrix {
        &self.r
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} witness operator",
            m.rows(),
            m.cols()
        )));
    }
    let tolerance = hermitian_tolerance(m.rows());
    let deviation = m.hermiticity_error();
    if deviation > tolerance {
        return Err(Error::NotHermitian { deviation, tolerance });
    }
    Ok(())
}

/// Smallest eigenvalue of the Hermitian part.
fn psd_slack(m: &ComplexMatrix) -> Result<f64> {
    min_eigenvalue(&m.hermitian_part())
}

fn feasible(min: f64, dim: usize) -> bool {
    min >= -WITNESS_TOLERANCE * dim as f64
}

fn choi_dims(ch: &Channel) -> (SubsystemDims, Vec<usize>) {
    let dims = ch.in_dims().concat(ch.out_dims());
    let outs = (ch.in_dims().len()..dims.len()).collect();
    (dims, outs)
}

/// `Ĵ^{T_B}`, the unnormalized Choi operator transposed on the output.
pub fn choi_output_transpose(ch: &Channel) -> Result<ComplexMatrix> {
    let (dims, outs) = choi_dims(ch);
    partial_transpose(&ch.unnormalized_choi(), &dims, &outs)
}

fn check_ab(ch: &Channel, m: &ComplexMatrix, what: &str) -> Result<()> {
    let n = ch.in_dim() * ch.out_dim();
    if m.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "{what} of size {} for a channel {}→{}",
            m.rows(),
            ch.in_dim(),
            ch.out_dim()
        )));
    }
    Ok(())
}

/// Checks `[[Y, −Ĵ^{T_B}], [−Ĵ^{T_B}, Z]] ⪰ 0`. The value
/// `(‖tr_B Y‖_op + ‖tr_B Z‖_op)/2` bounds `‖T_B ∘ N‖_⋄`, and its logarithm
/// bounds `Q(N)`.
pub fn verify_transposition_witness(
    ch: &Channel,
    w: &TranspositionWitness,
) -> Result<WitnessVerdict> {
    check_ab(ch, &w.y, "witness")?;
    let jt = choi_output_transpose(ch)?;
    let n = jt.rows();
    let mut block = ComplexMatrix::zeros(2 * n, 2 * n);
    let neg = -&jt;
    block.set_block(0, 0, &w.y);
    block.set_block(0, n, &neg);
    block.set_block(n, 0, &neg);
    block.set_block(n, n, &w.z);
    let min = psd_slack(&block)?;
    let (dims, outs) = choi_dims(ch);
    let value = 0.5
        * (operator_norm(&partial_trace(&w.y, &dims, &outs)?)
            + operator_norm(&partial_trace(&w.z, &dims, &outs)?));
    Ok(WitnessVerdict {
        feasible: feasible(min, 2 * n),
        value,
        min_eigenvalue: min,
    })
}

/// Checks `−R ≤ Ĵ^{T_B} ≤ R` and `−I ⊗ X ≤ R^{T_B} ≤ I ⊗ X`. The value
/// `tr X` is `β`, whose logarithm bounds the classical and hence the
/// private capacity.
pub fn verify_beta_witness(ch: &Channel, w: &BetaWitness) -> Result<WitnessVerdict> {
    check_ab(ch, &w.r, "R")?;
    if w.x.rows() != ch.out_dim() {
        return Err(Error::DimensionMismatch(format!(
            "X of size {} for output dimension {}",
            w.x.rows(),
            ch.out_dim()
        )));
    }
    let jt = choi_output_transpose(ch)?;
    let (dims, outs) = choi_dims(ch);
    let rt = partial_transpose(&w.r, &dims, &outs)?;
    let ix = ComplexMatrix::identity(ch.in_dim()).kron(&w.x);
    let mut min = f64::INFINITY;
    for m in [&w.r - &jt, &w.r + &jt, &ix - &rt, &ix + &rt] {
        min = min.min(psd_slack(&m)?);
    }
    Ok(WitnessVerdict {
        feasible: feasible(min, jt.rows()),
        value: w.x.trace().re,
        min_eigenvalue: min,
    })
}

/// Diagonal projectors `P_0 = |00><00| + |11><11|` and
/// `P_1 = |01><01| + |10><10|` on two qubits.
fn parity_projectors() -> (ComplexMatrix, ComplexMatrix) {
    (
        ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 1.0]),
        ComplexMatrix::from_diag(&[0.0, 1.0, 1.0, 0.0]),
    )
}

/// Reorders an operator on `a0 b0 A0 B0` into Choi ordering `a0 A0 b0 B0`.
fn to_choi_order(m: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    permute_subsystems(m, &SubsystemDims::new(vec![2, 2, d, d])?, &[0, 2, 1, 3])
}

/// Transposition witness `Y = Z = d P_0 ⊗ |M_+| + d P_1 ⊗ |M_−|` for the
/// channel with Choi state `q ψ+ ⊗ σ_1 + (1−q) ψ− ⊗ σ_2`, where
/// `M_± = (qσ_1 ± (1−q)σ_2)^{T_{B_0}}`. Its value is `2^{bound}` for the
/// matching [`transposition_bound_general`](super::transposition_bound_general).
pub fn transposition_witness_for_shields(
    q: f64,
    sigma1: &DensityOperator,
    sigma2: &DensityOperator,
    d: usize,
) -> Result<TranspositionWitness> {
    check_probability("q", q)?;
    check_dimension("d", d, 2)?;
    let (plus, minus) = shield_blocks(q, sigma1, sigma2, d)?;
    let (p0, p1) = parity_projectors();
    let df = d as f64;
    let y = &p0.kron(&matrix_abs(&plus)?.scale(df)) + &p1.kron(&matrix_abs(&minus)?.scale(df));
    let y = to_choi_order(&y, d)?.hermitian_part();
    TranspositionWitness::new(y.clone(), y)
}

/// [`transposition_witness_for_shields`] for `N_{q,d}`.
pub fn transposition_witness_private(q: f64, d: usize) -> Result<TranspositionWitness> {
    check_dimension("d", d, 2)?;
    let (ps, pa, _) = sym_asym_projectors(d)?;
    let dims = shield_dims(d)?;
    let s1 = DensityOperator::new_unchecked(ps.scale(1.0 / d_sym(d) as f64), dims.clone());
    let s2 = DensityOperator::new_unchecked(pa.scale(1.0 / d_asym(d) as f64), dims);
    transposition_witness_for_shields(q, &s1, &s2, d)
}

fn beta_r(d: usize, coefficient: f64) -> Result<ComplexMatrix> {
    let (p0, p1) = parity_projectors();
    let psi = ComplexMatrix::projector(&max_entangled(d));
    let r = &p0.kron(&ComplexMatrix::identity(d * d).scale(1.0 / d as f64))
        + &p1.kron(&psi.scale(coefficient));
    to_choi_order(&r, d)
}

/// β witness for `N_{(d+1)/(2d),d}`: `R = (1/d) P_0 ⊗ I + P_1 ⊗ Ψ+` on
/// `a0 b0 A0 B0` (reordered to Choi ordering) and `X = I/d` on `b0 B0`,
/// with `tr X = 2` for every `d`.
pub fn beta_witness_private(d: usize) -> Result<BetaWitness> {
    check_dimension("d", d, 2)?;
    let x = ComplexMatrix::identity(2 * d).scale(1.0 / d as f64);
    BetaWitness::new(beta_r(d, 1.0)?, x)
}
