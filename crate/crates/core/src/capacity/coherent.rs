use crate::channels::{Channel, ChannelStructure};
use crate::error::{check_dimension, Error, Result};
use crate::matcore::matrix::ZERO;
use crate::matcore::{
    eigvals_hermitian, purify, spectrum_entropy, von_neumann_entropy, ComplexMatrix,
    SubsystemDims, C64,
};
use crate::states::{max_entangled, DensityOperator};

/// Default cap on the input dimension of a single coherent-information
/// evaluation on a tensor-power channel.
pub const SINGLE_EVALUATION_CAP: usize = 64;

/// Coherent information `I_c(ρ, N) = S(N(ρ)) − S(N^c(ρ))` in bits.
///
/// Channels carrying flag metadata are evaluated branch by branch,
/// `Σ p_i I_c(ρ, N_i)`.
pub fn coherent_info(ch: &Channel, rho: &DensityOperator) -> Result<f64> {
    check_input(ch, rho)?;
    let (psi, rank) = purify(rho)?;
    let factor = ComplexMatrix::from_vec_unchecked(rho.dim(), rank, psi);
    coherent_info_factor(ch, &factor)
}

/// Coherent information from the full output and the complementary channel,
/// ignoring any branch metadata.
pub fn coherent_info_direct(ch: &Channel, rho: &DensityOperator) -> Result<f64> {
    check_input(ch, rho)?;
    let b = ch.apply(rho)?;
    let e = ch.complementary().apply(rho)?;
    Ok(von_neumann_entropy(&b)? - von_neumann_entropy(&e)?)
}

fn check_input(ch: &Channel, rho: &DensityOperator) -> Result<()> {
    if rho.dim() != ch.in_dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} for channel input {}",
            rho.dim(),
            ch.in_dim()
        )));
    }
    Ok(())
}

/// `I_c` at `ρ = F F†`, where `F` is `d_in × k` with unit Frobenius norm.
pub(crate) fn coherent_info_factor(ch: &Channel, factor: &ComplexMatrix) -> Result<f64> {
    if let ChannelStructure::Flagged { branches, .. } = ch.structure() {
        let mut total = 0.0;
        for (p, branch) in branches {
            if *p > 0.0 {
                total += p * coherent_info_factor(branch, factor)?;
            }
        }
        return Ok(total);
    }
    let (sb, se) = output_entropies(ch, factor)?;
    Ok(sb - se)
}

/// `(S(B), S(E))` for the input `F F†`.
///
/// With `A_k = K_k F`, the output is `Σ A_k A_k†` and the environment state
/// is the Gram matrix `tr(A_i A_j†)`. When the Kraus count exceeds
/// `d_out · k`, the environment entropy is read off the reference-output
/// state `Σ |A_k>><<A_k|`, which has the same nonzero spectrum.
pub(crate) fn output_entropies(ch: &Channel, factor: &ComplexMatrix) -> Result<(f64, f64)> {
    let dout = ch.out_dim();
    let k = factor.cols();
    let images: Vec<ComplexMatrix> = ch.kraus().iter().map(|op| op.mul_unchecked(factor)).collect();
    let mut b = ComplexMatrix::zeros(dout, dout);
    for a in &images {
        b.add_scaled_assign(&a.mul_adjoint(a), C64::new(1.0, 0.0));
    }
    let sb = spectrum_entropy(&eigvals_hermitian(&b)?, dout)?;
    let r = images.len();
    let se = if r <= dout * k {
        let mut e = ComplexMatrix::zeros(r, r);
        for i in 0..r {
            for j in i..r {
                let v = images[j].inner(&images[i]);
                e[(i, j)] = v;
                e[(j, i)] = v.conj();
            }
        }
        spectrum_entropy(&eigvals_hermitian(&e)?, r)?
    } else {
        let n = dout * k;
        let mut rb = ComplexMatrix::zeros(n, n);
        for a in &images {
            let v = a.data();
            for (x, &vx) in v.iter().enumerate() {
                if vx == ZERO {
                    continue;
                }
                for (y, &vy) in v.iter().enumerate() {
                    rb[(x, y)] += vx * vy.conj();
                }
            }
        }
        spectrum_entropy(&eigvals_hermitian(&rb)?, n)?
    };
    Ok((sb, se))
}

/// State functional `I(A⟩B) = S(B) − S(AB)` on the marginal of `rho` on
/// the subsystems `a ∪ b`.
pub fn coherent_info_state(rho: &DensityOperator, a: &[usize], b: &[usize]) -> Result<f64> {
    rho.dims().check_indices(a)?;
    rho.dims().check_indices(b)?;
    if a.is_empty() {
        return Err(Error::Domain("the A side of the cut is empty".into()));
    }
    if a.iter().any(|i| b.contains(i)) {
        return Err(Error::Domain(format!("cut sides {a:?} and {b:?} overlap")));
    }
    let mut ab: Vec<usize> = a.iter().chain(b).copied().collect();
    ab.sort_unstable();
    let s_ab = von_neumann_entropy(&rho.reduce_to(&ab)?)?;
    let s_b = if b.is_empty() {
        0.0
    } else {
        let mut bs = b.to_vec();
        bs.sort_unstable();
        von_neumann_entropy(&rho.reduce_to(&bs)?)?
    };
    Ok(s_b - s_ab)
}

/// Input states used as certified lower-bound witnesses for `Q^(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ansatz {
    /// `I/d_A` on the whole input.
    MaximallyMixed,
    /// `⊗_t (I_2/2 ⊗ |0><0|)` on factors `[2, d_1, 2, d_2, …]`: a uniformly
    /// mixed key bit with the shield in `|0>` for every copy.
    KeyMixedShieldZero,
    /// `I_2/2 ⊗ ⊗_i |Ψ><Ψ|^{A'_i A_i}` on factors
    /// `[2, d_1 … d_N, d_1 … d_N]`: a mixed key bit with each shield input
    /// maximally entangled with the input of an assisting channel.
    KeyMixedShieldEntangled,
}

impl Ansatz {
    pub const ALL: [Ansatz; 3] = [
        Ansatz::MaximallyMixed,
        Ansatz::KeyMixedShieldZero,
        Ansatz::KeyMixedShieldEntangled,
    ];
}

/// The ansatz state on the given input factors, or `DimensionMismatch`
/// when the factors do not have the required shape.
pub fn ansatz_state(kind: Ansatz, in_dims: &SubsystemDims) -> Result<DensityOperator> {
    let f = in_dims.factors();
    let mismatch = |what: &str| {
        Err(Error::DimensionMismatch(format!(
            "{what} ansatz does not fit input factors {f:?}"
        )))
    };
    match kind {
        Ansatz::MaximallyMixed => Ok(DensityOperator::maximally_mixed(in_dims.clone())),
        Ansatz::KeyMixedShieldZero => {
            if f.len() % 2 != 0 || f.chunks(2).any(|c| c[0] != 2) {
                return mismatch("key-mixed shield-zero");
            }
            let mut m = ComplexMatrix::identity(1);
            for c in f.chunks(2) {
                let copy = ComplexMatrix::identity(2)
                    .scale(0.5)
                    .kron(&ComplexMatrix::unit(c[1], c[1], 0, 0));
                m = m.kron(&copy);
            }
            Ok(DensityOperator::new_unchecked(m, in_dims.clone()))
        }
        Ansatz::KeyMixedShieldEntangled => {
            if f.len() < 3 || f.len() % 2 == 0 || f[0] != 2 {
                return mismatch("key-mixed shield-entangled");
            }
            let n = (f.len() - 1) / 2;
            let (shield, assist) = f[1..].split_at(n);
            if shield != assist {
                return mismatch("key-mixed shield-entangled");
            }
            // build I/2 ⊗ Ψ_{d_1} ⊗ … with pairs adjacent, then interleave
            let mut m = ComplexMatrix::identity(2).scale(0.5);
            let mut paired = vec![2];
            for &d in shield {
                m = m.kron(&ComplexMatrix::projector(&max_entangled(d)));
                paired.extend([d, d]);
            }
            let paired = DensityOperator::new_unchecked(m, SubsystemDims::new(paired)?);
            let perm: Vec<usize> = std::iter::once(0)
                .chain((0..n).map(|i| 1 + 2 * i))
                .chain((0..n).map(|i| 2 + 2 * i))
                .collect();
            paired.permute(&perm)
        }
    }
}

/// `I_c` at the given ansatz.
pub fn ansatz_value(ch: &Channel, kind: Ansatz) -> Result<f64> {
    coherent_info(ch, &ansatz_state(kind, ch.in_dims())?)
}

/// Largest coherent information over the ansatz states that fit the input
/// factors; a certified lower bound on `Q^(1)(ch)`.
pub fn q1_ansatz_value(ch: &Channel) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for kind in Ansatz::ALL {
        match ansatz_value(ch, kind) {
            Ok(v) => best = best.max(v),
            Err(Error::DimensionMismatch(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// `I_c(N^{⊗n}, ρ)` for `N = N_{(d+1)/(2d), d}` at the state
/// `Σ_x p_x |x><x| ⊗ |0^n><0^n|` with uniform `p`, evaluated on the full
/// tensor-power channel.
pub fn multi_copy_ansatz_value(n: usize, d: usize) -> Result<f64> {
    multi_copy_ansatz_value_capped(n, d, SINGLE_EVALUATION_CAP)
}

pub fn multi_copy_ansatz_value_capped(n: usize, d: usize, cap: usize) -> Result<f64> {
    check_dimension("n", n, 1)?;
    check_dimension("d", d, 2)?;
    let requested = (2 * d)
        .checked_pow(n as u32)
        .ok_or(Error::DimensionCap { requested: usize::MAX, cap })?;
    if requested > cap {
        return Err(Error::DimensionCap { requested, cap });
    }
    let q = (d + 1) as f64 / (2 * d) as f64;
    let ch = crate::channels::tensor_power(&crate::channels::private_channel(q, d)?, n)?;
    ansatz_value(&ch, Ansatz::KeyMixedShieldZero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        erasure_channel, erasure_flagged, identity_channel, private_channel, tensor,
    };
    use crate::matcore::entropy::h;
    use crate::random::{random_channel, random_state};
    use crate::states::gamma_qd;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn special(d: usize) -> Channel {
        private_channel((d + 1) as f64 / (2 * d) as f64, d).unwrap()
    }

    #[test]
    fn private_channel_on_key_span() {
        let dims = SubsystemDims::new(vec![2, 2]).unwrap();
        let m = ComplexMatrix::from_diag(&[0.5, 0.0, 0.5, 0.0]);
        let rho = DensityOperator::new(m, dims).unwrap();
        let ch = special(2);
        assert!((coherent_info(&ch, &rho).unwrap() - 0.5).abs() < 1e-12);
        assert!((coherent_info_direct(&ch, &rho).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn erasure_at_maximally_mixed_input() {
        for d in [2, 3] {
            for lambda in [0.0, 0.2, 0.5, 0.9] {
                let rho = DensityOperator::maximally_mixed(SubsystemDims::single(d));
                let want = (1.0 - 2.0 * lambda) * (d as f64).log2();
                for ch in [erasure_channel(lambda, d).unwrap(), erasure_flagged(lambda, d).unwrap()] {
                    assert!((coherent_info(&ch, &rho).unwrap() - want).abs() < 1e-10);
                    assert!((coherent_info_direct(&ch, &rho).unwrap() - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn pbit_cuts() {
        for d in [2, 3] {
            for q in [0.3, 0.5, 0.75] {
                let g = gamma_qd(q, d).unwrap();
                let full = coherent_info_state(&g, &[0], &[1, 2, 3]).unwrap();
                assert!((full - 1.0).abs() < 1e-10);
                let key = coherent_info_state(&g, &[0], &[1]).unwrap();
                let c = (2.0 * q - 1.0).abs();
                assert!((key - (1.0 - h((1.0 + c) / 2.0))).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn product_state_cut_is_minus_entropy() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_state(&mut rng, &SubsystemDims::single(2));
        let b = random_state(&mut rng, &SubsystemDims::single(3));
        let v = coherent_info_state(&a.tensor(&b), &[0], &[1]).unwrap();
        assert!((v + von_neumann_entropy(&a).unwrap()).abs() < 1e-10);
        assert!(coherent_info_state(&a.tensor(&b), &[0], &[0]).is_err());
        assert!(coherent_info_state(&a.tensor(&b), &[], &[1]).is_err());
    }

    #[test]
    fn ansatz_shapes() {
        let d = SubsystemDims::new(vec![2, 3, 3]).unwrap();
        let s = ansatz_state(Ansatz::KeyMixedShieldEntangled, &d).unwrap();
        let shield = s.reduce_to(&[1, 2]).unwrap();
        let psi = ComplexMatrix::projector(&max_entangled(3));
        assert!(shield.matrix().max_abs_diff(&psi) < 1e-14);
        assert!(ansatz_state(Ansatz::KeyMixedShieldZero, &d).is_err());
        let two = SubsystemDims::new(vec![2, 2, 3, 2, 3]).unwrap();
        let s = ansatz_state(Ansatz::KeyMixedShieldEntangled, &two).unwrap();
        let pair = s.reduce_to(&[2, 4]).unwrap();
        assert!(pair.matrix().max_abs_diff(&psi) < 1e-14);
        let z = SubsystemDims::new(vec![2, 3, 2, 3]).unwrap();
        let s = ansatz_state(Ansatz::KeyMixedShieldZero, &z).unwrap();
        assert!((s.matrix()[(0, 0)].re - 0.25).abs() < 1e-15);
        assert!((s.matrix()[(3, 3)].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ansatz_values() {
        let id = identity_channel(SubsystemDims::single(2));
        assert!((q1_ansatz_value(&id).unwrap() - 1.0).abs() < 1e-12);
        let id6 = identity_channel(SubsystemDims::new(vec![2, 3]).unwrap());
        assert!((q1_ansatz_value(&id6).unwrap() - 6f64.log2()).abs() < 1e-12);
        assert!((q1_ansatz_value(&special(2)).unwrap() - 0.5).abs() < 1e-12);
        for (q, lambda) in [(0.75, 0.5), (0.6, 0.9), (0.3, 0.7)] {
            let ch = tensor(&private_channel(q, 2).unwrap(), &erasure_channel(lambda, 2).unwrap());
            let v = ansatz_value(&ch, Ansatz::KeyMixedShieldEntangled).unwrap();
            assert!((v - (1.0 - lambda * h(q))).abs() < 1e-10);
        }
    }

    #[test]
    fn multi_copy_values() {
        assert!((multi_copy_ansatz_value(1, 2).unwrap() - 0.5).abs() < 1e-10);
        assert!((multi_copy_ansatz_value(2, 2).unwrap() - 1.0).abs() < 1e-10);
        assert!((multi_copy_ansatz_value(1, 3).unwrap() - 1.0 / 3.0).abs() < 1e-10);
        assert!(matches!(
            multi_copy_ansatz_value(3, 3),
            Err(Error::DimensionCap { requested: 216, cap: 64 })
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let rho = DensityOperator::maximally_mixed(SubsystemDims::single(3));
        assert!(matches!(
            coherent_info(&special(2), &rho),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn composition_can_beat_the_second_channel_alone() {
        // N1 prepares a Bell pair from a pure input and N2 swaps the output
        // into its environment, so I_c(N2∘N1, |0>) = 0 > I_c(N2, I/2) = −1.
        let bell = crate::states::max_entangled(2);
        let v = ComplexMatrix::from_fn(4, 1, |r, _| bell[r]);
        let n1 = Channel::new(SubsystemDims::single(1), SubsystemDims::single(2), vec![
            v.block(0, 0, 2, 1),
            v.block(2, 0, 2, 1),
        ])
        .unwrap();
        let zero = DensityOperator::basis(0, SubsystemDims::single(1));
        let n2 = crate::channels::replacement_channel(&DensityOperator::basis(
            0,
            SubsystemDims::single(2),
        ), 2)
        .unwrap();
        let composed = Channel::compose(&n2, &n1).unwrap();
        let whole = coherent_info(&composed, &zero).unwrap();
        let second = coherent_info(&n2, &n1.apply(&zero).unwrap()).unwrap();
        assert!(whole.abs() < 1e-12);
        assert!((second + 1.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn identity_gives_entropy(seed in any::<u64>(), d in 2usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_state(&mut rng, &SubsystemDims::single(d));
            let id = identity_channel(SubsystemDims::single(d));
            let s = von_neumann_entropy(&rho).unwrap();
            prop_assert!((coherent_info(&id, &rho).unwrap() - s).abs() < 1e-9);
        }

        #[test]
        fn branch_and_direct_routes_agree(seed in any::<u64>(), lambda in 0.0f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = random_channel(&mut rng, 2, 2, 2);
            let ch = tensor(&n, &erasure_channel(lambda, 2).unwrap());
            let rho = random_state(&mut rng, ch.in_dims());
            let a = coherent_info(&ch, &rho).unwrap();
            let b = coherent_info_direct(&ch, &rho).unwrap();
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }

        #[test]
        fn bottleneck_inequality(seed in any::<u64>(), k1 in 1usize..4, k2 in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n1 = random_channel(&mut rng, 2, 3, k1);
            let n2 = random_channel(&mut rng, 3, 2, k2);
            let rho = random_state(&mut rng, &SubsystemDims::single(2));
            let composed = Channel::compose(&n2, &n1).unwrap();
            let whole = coherent_info(&composed, &rho).unwrap();
            prop_assert!(whole <= coherent_info(&n1, &rho).unwrap() + 1e-9);
        }

        #[test]
        fn replacement_on_second_output_leaves_cut_unchanged(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dims = SubsystemDims::new(vec![2, 2, 3]).unwrap();
            let rho = random_state(&mut rng, &dims);
            let sigma = random_state(&mut rng, &SubsystemDims::single(3));
            let erase = crate::channels::replacement_channel(&sigma, 3).unwrap();
            let id = identity_channel(SubsystemDims::new(vec![2, 2]).unwrap());
            let out = tensor(&id, &erase).apply(&rho).unwrap().with_dims(dims).unwrap();
            let with = coherent_info_state(&out, &[0], &[1, 2]).unwrap();
            let without = coherent_info_state(&rho, &[0], &[1]).unwrap();
            prop_assert!((with - without).abs() < 1e-9);
        }

        #[test]
        fn kraus_order_does_not_matter(seed in any::<u64>(), shift in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ch = random_channel(&mut rng, 3, 2, 4);
            let mut ops = ch.kraus().to_vec();
            let len = ops.len();
            ops.rotate_left(shift % len);
            let permuted = Channel::new(ch.in_dims().clone(), ch.out_dims().clone(), ops).unwrap();
            let rho = random_state(&mut rng, &SubsystemDims::single(3));
            let a = coherent_info(&ch, &rho).unwrap();
            let b = coherent_info(&permuted, &rho).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
