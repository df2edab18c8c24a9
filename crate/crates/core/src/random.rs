//! Random matrices, states and channels for tests and benchmarks.
//!
//! All samplers take an explicit RNG so callers control reproducibility.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::Channel;
use crate::matcore::{ComplexMatrix, SubsystemDims, C64};
use crate::states::DensityOperator;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// Isometry `rows x cols` (`rows ≥ cols`) from Gram-Schmidt on Gaussian
/// columns.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    while basis.len() < cols {
        let mut v: Vec<C64> = (0..rows).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for b in &basis {
                let ov: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= ov * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i])
}

/// Haar-distributed unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_isometry(rng, n, n)
}

/// Random density operator of rank at most `rank`, `GG†/tr(GG†)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> DensityOperator {
    let g = random_matrix(rng, n, rank.max(1));
    let m = g.mul_adjoint(&g);
    let t = m.trace().re;
    DensityOperator::new_unchecked(m.scale(1.0 / t).hermitian_part(), SubsystemDims::single(n))
}

/// Random density operator carrying the given factor dimensions.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dims: &SubsystemDims) -> DensityOperator {
    let n = dims.total();
    let rho = random_density(rng, n, n);
    DensityOperator::new_unchecked(rho.into_matrix(), dims.clone())
}

/// Random pure state vector.
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    random_isometry(rng, n, 1).into_data()
}

/// Random channel from a random Stinespring isometry. The Kraus count is
/// raised to `ceil(d_in / d_out)` when `kraus` is too small for an isometry.
pub fn random_channel<R: Rng + ?Sized>(
    rng: &mut R,
    d_in: usize,
    d_out: usize,
    kraus: usize,
) -> Channel {
    let kraus = kraus.max(d_in.div_ceil(d_out));
    let v = random_isometry(rng, d_out * kraus, d_in);
    let ks = (0..kraus).map(|k| v.block(k * d_out, 0, d_out, d_in)).collect();
    Channel::new(SubsystemDims::single(d_in), SubsystemDims::single(d_out), ks)
        .expect("isometry blocks form a channel")
}
