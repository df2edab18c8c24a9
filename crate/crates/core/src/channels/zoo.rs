use crate::channels::{flagged, Channel, ChannelStructure};
use crate::error::{check_dimension, check_probability, Result};
use crate::matcore::matrix::ONE;
use crate::matcore::{eig_hermitian, ComplexMatrix, SubsystemDims, C64};
use crate::states::{gamma_qd, DensityOperator};

/// Identity channel on the given factors.
pub fn identity_channel(dims: SubsystemDims) -> Channel {
    let n = dims.total();
    Channel::from_parts(
        dims.clone(),
        dims,
        vec![ComplexMatrix::identity(n)],
        ChannelStructure::Plain,
    )
}

/// Isometric embedding `X ↦ V X V†`.
pub fn isometry_channel(
    v: ComplexMatrix,
    in_dims: SubsystemDims,
    out_dims: SubsystemDims,
) -> Result<Channel> {
    Channel::new(in_dims, out_dims, vec![v])
}

/// `q` equal to `(d+1)/(2d)` up to rounding.
pub fn is_special_q(q: f64, d: usize) -> bool {
    (q - (d + 1) as f64 / (2 * d) as f64).abs() < 1e-15
}

/// The private channel `N_{q,d}` from `a'0 A'0 = C^2 ⊗ C^d` to
/// `b0 B0 = C^2 ⊗ C^d` whose Choi state is `γ_{q,d}`.
///
/// At `q = (d+1)/(2d)` the Kraus operators are
/// `K_ij = d^{-1/2}(|0j><0i| + |1i><1j|)`; otherwise they come from the
/// spectral decomposition of `γ_{q,d}`.
pub fn private_channel(q: f64, d: usize) -> Result<Channel> {
    check_probability("q", q)?;
    check_dimension("d", d, 2)?;
    let dims = SubsystemDims::new(vec![2, d])?;
    if is_special_q(q, d) {
        let s = 1.0 / (d as f64).sqrt();
        let n = 2 * d;
        let mut ops = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut k = ComplexMatrix::zeros(n, n);
                k[(j, i)] += C64::new(s, 0.0);
                k[(d + i, d + j)] += C64::new(s, 0.0);
                ops.push(k);
            }
        }
        return Channel::new(dims.clone(), dims, ops);
    }
    // γ is ordered a0 b0 A0 B0; the Choi state wants a0 A0 b0 B0
    let j = gamma_qd(q, d)?.permute(&[0, 2, 1, 3])?;
    Channel::from_choi(&j, 2 * d)?.with_dims(dims.clone(), dims)
}

/// Replacement channel `X ↦ tr(X) σ` on inputs of dimension `d_in`.
pub fn replacement_channel(sigma: &DensityOperator, d_in: usize) -> Result<Channel> {
    check_dimension("d_in", d_in, 1)?;
    let (vals, vecs) = eig_hermitian(sigma.matrix())?;
    let n = sigma.dim();
    let mut ops = Vec::new();
    for (k, &l) in vals.iter().enumerate() {
        if l <= 1e-15 {
            continue;
        }
        let w = l.sqrt();
        for i in 0..d_in {
            ops.push(ComplexMatrix::from_fn(n, d_in, |b, c| {
                if c == i {
                    vecs[(b, k)] * w
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
        }
    }
    Channel::new(SubsystemDims::single(d_in), sigma.dims().clone(), ops)
}

/// Erasure channel `E_{λ,d}(ρ) = (1−λ)ρ ⊕ λ tr(ρ)|e><e|` with a `(d+1)`
/// dimensional output whose last basis vector is the erasure flag `|e>`.
///
/// The erased and unerased outputs are orthogonal, so the channel carries
/// branch metadata `(1−λ, id)`, `(λ, X ↦ tr(X)|e><e|)`.
pub fn erasure_channel(lambda: f64, d: usize) -> Result<Channel> {
    check_probability("lambda", lambda)?;
    check_dimension("d", d, 1)?;
    let out = SubsystemDims::single(d + 1);
    let embed = ComplexMatrix::from_fn(d + 1, d, |b, i| if b == i { ONE } else { C64::new(0.0, 0.0) });
    let mut ops = vec![embed.scale((1.0 - lambda).sqrt())];
    for i in 0..d {
        ops.push(ComplexMatrix::unit(d + 1, d, d, i).scale(lambda.sqrt()));
    }
    let ch = Channel::new(SubsystemDims::single(d), out.clone(), ops)?.pruned();
    let keep = isometry_channel(embed, SubsystemDims::single(d), out.clone())?;
    let erase = replacement_channel(&DensityOperator::basis(d, out), d)?;
    Ok(ch.with_structure(ChannelStructure::Flagged {
        branches: vec![(1.0 - lambda, keep), (lambda, erase)],
        flag_factor: None,
    }))
}

/// Flagged erasure channel `(1−λ)|0><0| ⊗ id + λ|1><1| ⊗ E_1` with output
/// factors `[2, d]`; `E_1` replaces the input by `|0><0|`.
pub fn erasure_flagged(lambda: f64, d: usize) -> Result<Channel> {
    check_probability("lambda", lambda)?;
    check_dimension("d", d, 1)?;
    let dims = SubsystemDims::single(d);
    let erase = replacement_channel(&DensityOperator::basis(0, dims.clone()), d)?;
    flagged(vec![(1.0 - lambda, identity_channel(dims)), (lambda, erase)])
}

/// Generalized Pauli operator `X^a Z^b` on `C^d`.
pub fn weyl(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let w = 2.0 * std::f64::consts::PI / d as f64;
    ComplexMatrix::from_fn(d, d, |r, c| {
        if r == (c + a) % d {
            C64::from_polar(1.0, w * (b * c) as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Depolarizing channel `D_{p,d}(ρ) = (1−p)ρ + p I/d`, `p ∈ [0, 1]`.
///
/// Kraus operators are `√(1 − p(d²−1)/d²) I` and `(√p/d) X^a Z^b`.
pub fn depolarizing_channel(p: f64, d: usize) -> Result<Channel> {
    check_probability("p", p)?;
    check_dimension("d", d, 1)?;
    let dd = (d * d) as f64;
    let mut ops = vec![ComplexMatrix::identity(d).scale((1.0 - p * (dd - 1.0) / dd).sqrt())];
    if p > 0.0 {
        for a in 0..d {
            for b in 0..d {
                if a + b > 0 {
                    ops.push(weyl(d, a, b).scale(p.sqrt() / d as f64));
                }
            }
        }
    }
    Channel::new(SubsystemDims::single(d), SubsystemDims::single(d), ops)
}
