use crate::error::{check_dimension, Error, Result};
use crate::matcore::{min_eigenvalue, ComplexMatrix, SubsystemDims};
use crate::states::{d_asym, d_sym, sym_asym_projectors, DensityOperator};

/// Default cap on the total dimension of constructed states.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// Layout of the PPT approximation `ζ_{q,d,r,m,N}`.
///
/// Factors are `[a0, b0, A_0, B_0, A_1, B_1, ...]`: two key qubits followed
/// by `r·m·N` interleaved shield pairs of dimension `d`. The state is a
/// tensor power over `m` blocks of `r·N` pairs each; copy `j` owns pairs
/// `j·r .. (j+1)·r` inside every block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZetaLayout {
    pub d: usize,
    pub r: usize,
    pub m: usize,
    pub n: usize,
}

impl ZetaLayout {
    pub fn pairs(&self) -> usize {
        self.r * self.m * self.n
    }

    pub fn dims(&self) -> SubsystemDims {
        let mut f = vec![2, 2];
        f.extend(std::iter::repeat(self.d).take(2 * self.pairs()));
        SubsystemDims::new(f).expect("positive factors")
    }

    /// Total dimension `4 d^{2rmN}`, or `None` on overflow.
    pub fn total_dim(&self) -> Option<usize> {
        let shield = self.d.checked_pow(u32::try_from(2 * self.pairs()).ok()?)?;
        shield.checked_mul(4)
    }

    fn copy_pairs(&self, j: usize) -> Vec<usize> {
        let block = self.r * self.n;
        (0..self.m)
            .flat_map(|mi| (0..self.r).map(move |t| mi * block + j * self.r + t))
            .collect()
    }

    /// Subsystem indices of copy `j`'s shield (`A` and `B` factors).
    pub fn copy_subsystems(&self, j: usize) -> Vec<usize> {
        self.copy_pairs(j)
            .into_iter()
            .flat_map(|p| [2 + 2 * p, 3 + 2 * p])
            .collect()
    }

    /// Subsystem indices of `b0` and every `B` factor.
    pub fn bob_subsystems(&self) -> Vec<usize> {
        std::iter::once(1)
            .chain((0..self.pairs()).map(|p| 3 + 2 * p))
            .collect()
    }
}

/// The PPT state `ζ_{q,d,r,m,N}` with the default dimension cap.
pub fn zeta_state(q: f64, d: usize, r: usize, m: usize, n: usize) -> Result<DensityOperator> {
    zeta_state_capped(q, d, r, m, n, DEFAULT_DIMENSION_CAP)
}

/// The PPT state `ζ_{q,d,r,m,N}`:
///
/// ```text
/// [q(τ1+τ2)/2]^⊗m   on |00><00| and |11><11|
/// [q(τ1−τ2)/2]^⊗m   on |00><11| and |11><00|
/// [(1/2−q)τ2]^⊗m    on |01><01| and |10><10|
/// ```
///
/// with `τ1 = ((P_sym/d_sym + P_asym/d_asym)/2)^⊗rN` and
/// `τ2 = (P_sym/d_sym)^⊗rN`, normalized by `2q^m + 2(1/2−q)^m`.
pub fn zeta_state_capped(
    q: f64,
    d: usize,
    r: usize,
    m: usize,
    n: usize,
    cap: usize,
) -> Result<DensityOperator> {
    if !(q > 0.0 && q <= 0.5) {
        return Err(Error::Domain(format!("q = {q} is not in (0, 1/2]")));
    }
    check_dimension("d", d, 2)?;
    check_dimension("r", r, 1)?;
    check_dimension("m", m, 1)?;
    check_dimension("N", n, 1)?;
    let layout = ZetaLayout { d, r, m, n };
    let total = layout.total_dim().unwrap_or(usize::MAX);
    if total > cap {
        return Err(Error::DimensionCap { requested: total, cap });
    }
    let (ps, pa, _) = sym_asym_projectors(d)?;
    let ps = ps.scale(1.0 / d_sym(d) as f64);
    let pa = pa.scale(1.0 / d_asym(d) as f64);
    let t1_pair = (&ps + &pa).scale(0.5);
    let tau1 = t1_pair.kron_pow(r * n);
    let tau2 = ps.kron_pow(r * n);
    let diag = (&tau1 + &tau2).scale(0.5 * q).kron_pow(m);
    let off = (&tau1 - &tau2).scale(0.5 * q).kron_pow(m);
    let side = tau2.scale(0.5 - q).kron_pow(m);
    let s = diag.rows();
    let mut z = ComplexMatrix::zeros(4 * s, 4 * s);
    z.set_block(0, 0, &diag);
    z.set_block(3 * s, 3 * s, &diag);
    z.set_block(0, 3 * s, &off);
    z.set_block(3 * s, 0, &off);
    z.set_block(s, s, &side);
    z.set_block(2 * s, 2 * s, &side);
    let norm = 2.0 * q.powi(m as i32) + 2.0 * (0.5 - q).powi(m as i32);
    Ok(DensityOperator::new_unchecked(z.scale(1.0 / norm), layout.dims()))
}

/// Smallest eigenvalue of the partial transpose over `transposed`, without
/// clamping.
pub fn ppt_min_eigenvalue(rho: &DensityOperator, transposed: &[usize]) -> Result<f64> {
    min_eigenvalue(&rho.partial_transpose(transposed)?)
}
