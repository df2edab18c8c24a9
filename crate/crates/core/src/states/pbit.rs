use crate::error::{check_dimension, check_probability, Error, Result};
use crate::matcore::eigen::is_unitary;
use crate::matcore::matrix::{ONE, ZERO};
use crate::matcore::{swap_operator, ComplexMatrix, SubsystemDims, C64};
use crate::states::DensityOperator;

/// `|Ψ> = d^{-1/2} Σ |i>|i>` on `C^d ⊗ C^d`.
pub fn max_entangled(d: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d * d];
    let a = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[i * d + i] = a;
    }
    v
}

/// Projectors onto the symmetric and antisymmetric subspaces of
/// `C^d ⊗ C^d`, together with the swap `F`.
pub fn sym_asym_projectors(d: usize) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
    check_dimension("d", d, 2)?;
    let f = swap_operator(d);
    let id = ComplexMatrix::identity(d * d);
    let p_sym = (&id + &f).scale(0.5);
    let p_asym = (&id - &f).scale(0.5);
    Ok((p_sym, p_asym, f))
}

pub fn d_sym(d: usize) -> usize {
    d * (d + 1) / 2
}

pub fn d_asym(d: usize) -> usize {
    d * (d - 1) / 2
}

/// `(|00> ± |11>)/√2`.
pub fn bell(sign: f64) -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![C64::new(s, 0.0), ZERO, ZERO, C64::new(sign * s, 0.0)]
}

/// The pbit `γ_{q,d} = q ψ+ ⊗ P_sym/d_sym + (1−q) ψ− ⊗ P_asym/d_asym` on
/// `a0 b0 A0 B0` with factors `[2, 2, d, d]`.
pub fn gamma_qd(q: f64, d: usize) -> Result<DensityOperator> {
    check_probability("q", q)?;
    check_dimension("d", d, 2)?;
    let (p_sym, p_asym, _) = sym_asym_projectors(d)?;
    let plus = ComplexMatrix::projector(&bell(1.0));
    let minus = ComplexMatrix::projector(&bell(-1.0));
    let a = plus.kron(&p_sym.scale(q / d_sym(d) as f64));
    let b = minus.kron(&p_asym.scale((1.0 - q) / d_asym(d) as f64));
    Ok(DensityOperator::new_unchecked(
        &a + &b,
        SubsystemDims::new(vec![2, 2, d, d])?,
    ))
}

/// Standard form of a private state: key dimension, shield state and
/// twisting unitaries.
#[derive(Clone, Debug)]
pub struct PbitSpec {
    pub key_dim: usize,
    pub shield: DensityOperator,
    pub unitaries: Vec<ComplexMatrix>,
}

impl PbitSpec {
    pub fn validate(&self) -> Result<()> {
        if self.key_dim == 0 || self.unitaries.len() != self.key_dim {
            return Err(Error::InvalidSpec(format!(
                "{} unitaries for key dimension {}",
                self.unitaries.len(),
                self.key_dim
            )));
        }
        let n = self.shield.dim();
        for (k, u) in self.unitaries.iter().enumerate() {
            if u.rows() != n || !is_unitary(u, 1e-9) {
                return Err(Error::InvalidSpec(format!("U_{k} is not a {n}x{n} unitary")));
            }
        }
        DensityOperator::new(self.shield.matrix().clone(), self.shield.dims().clone())
            .map_err(|e| Error::InvalidSpec(format!("shield: {e}")))?;
        Ok(())
    }
}

/// `γ = (1/d0) Σ_{k,l} |k><l| ⊗ |k><l| ⊗ U_k σ U_l†`, factors
/// `[d0, d0, shield factors...]`.
pub fn pbit_from_spec(spec: &PbitSpec) -> Result<DensityOperator> {
    spec.validate()?;
    let d0 = spec.key_dim;
    let n = spec.shield.dim();
    let sigma = spec.shield.matrix();
    let twisted: Vec<ComplexMatrix> = spec.unitaries.iter().map(|u| u * sigma).collect();
    let mut g = ComplexMatrix::zeros(d0 * d0 * n, d0 * d0 * n);
    for k in 0..d0 {
        for l in 0..d0 {
            let block = twisted[k].mul_adjoint(&spec.unitaries[l]).scale(1.0 / d0 as f64);
            g.set_block((k * d0 + k) * n, (l * d0 + l) * n, &block);
        }
    }
    let dims = SubsystemDims::new(vec![d0, d0]).unwrap().concat(spec.shield.dims());
    Ok(DensityOperator::new_unchecked(g.hermitian_part(), dims))
}

/// Orthonormal basis of `C^d ⊗ C^d`: symmetric vectors first, then
/// antisymmetric ones, as the columns of a unitary.
pub fn sym_asym_basis(d: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut v = vec![ZERO; d * d];
        v[i * d + i] = ONE;
        cols.push(v);
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut v = vec![ZERO; d * d];
            v[i * d + j] = C64::new(s, 0.0);
            v[j * d + i] = C64::new(s, 0.0);
            cols.push(v);
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut v = vec![ZERO; d * d];
            v[i * d + j] = C64::new(s, 0.0);
            v[j * d + i] = C64::new(-s, 0.0);
            cols.push(v);
        }
    }
    ComplexMatrix::from_fn(d * d, d * d, |r, c| cols[c][r])
}

/// Standard-form data reproducing `γ_{q,d}`: `σ` diagonal with weights
/// `2q/(d(d+1))` and `2(1−q)/(d(d−1))`, `U_0 = U`, `U_1 = U diag(I, −I)`.
pub fn pbit_spec_for_gamma(q: f64, d: usize) -> Result<PbitSpec> {
    check_probability("q", q)?;
    check_dimension("d", d, 2)?;
    let ds = d_sym(d);
    let u = sym_asym_basis(d);
    let diag: Vec<f64> = (0..d * d)
        .map(|k| {
            if k < ds {
                2.0 * q / (d * (d + 1)) as f64
            } else {
                2.0 * (1.0 - q) / (d * (d - 1)) as f64
            }
        })
        .collect();
    let signs: Vec<f64> = (0..d * d).map(|k| if k < ds { 1.0 } else { -1.0 }).collect();
    let u1 = &u * &ComplexMatrix::from_diag(&signs);
    Ok(PbitSpec {
        key_dim: 2,
        shield: DensityOperator::new_unchecked(
            ComplexMatrix::from_diag(&diag),
            SubsystemDims::new(vec![d, d])?,
        ),
        unitaries: vec![u, u1],
    })
}

/// Key overlap `c = tr(U_0 σ U_1†)` of a pbit in standard form.
pub fn key_overlap(spec: &PbitSpec) -> Result<C64> {
    if spec.key_dim != 2 {
        return Err(Error::InvalidSpec("key overlap needs key dimension 2".into()));
    }
    Ok((&spec.unitaries[0] * spec.shield.matrix())
        .mul_adjoint(&spec.unitaries[1])
        .trace())
}

/// Key overlap read off a state on `a0 b0 (shield)` with `a0 = b0 = C^2`:
/// `2 tr <00|γ|11>`, which equals `tr(U_0 σ U_1†)` for a pbit.
pub fn pbit_overlap(gamma: &DensityOperator) -> Result<C64> {
    let f = gamma.dims().factors();
    if f.len() < 2 || f[0] != 2 || f[1] != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected two qubit key factors, got {f:?}"
        )));
    }
    let n = gamma.dim() / 4;
    let m = gamma.matrix();
    let t: C64 = (0..n).map(|s| m[(s, 3 * n + s)]).sum();
    Ok(t * 2.0)
}
