use crate::channels::{Channel, ChannelStructure};
use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, SubsystemDims};

/// Branches `(p_i, N_i)` of a flagged channel `Σ p_i |i><i| ⊗ N_i`.
#[derive(Clone, Debug)]
pub struct FlaggedChannel {
    branches: Vec<(f64, Channel)>,
}

impl FlaggedChannel {
    /// Checks the probabilities and that all branches share input and
    /// output dimensions.
    pub fn new(branches: Vec<(f64, Channel)>) -> Result<Self> {
        let Some((_, first)) = branches.first() else {
            return Err(Error::NotAChannel("flagged channel with no branches".into()));
        };
        let total: f64 = branches.iter().map(|(p, _)| p).sum();
        if branches.iter().any(|(p, _)| !(*p >= 0.0)) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotAChannel(format!(
                "branch probabilities must be nonnegative and sum to 1, got {total}"
            )));
        }
        for (_, ch) in &branches {
            if ch.in_dim() != first.in_dim() || ch.out_dim() != first.out_dim() {
                return Err(Error::DimensionMismatch(
                    "flagged branches must share input and output dimensions".into(),
                ));
            }
        }
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[(f64, Channel)] {
        &self.branches
    }

    /// Channel with an explicit flag register as its first output factor.
    pub fn to_channel(&self) -> Channel {
        let k = self.branches.len();
        let first = &self.branches[0].1;
        let flag = ComplexMatrix::identity(k);
        let mut ops = Vec::new();
        for (i, (p, ch)) in self.branches.iter().enumerate() {
            if *p == 0.0 {
                continue;
            }
            let e = flag.block(0, i, k, 1);
            for op in ch.kraus() {
                ops.push(e.kron(op).scale(p.sqrt()));
            }
        }
        let out = SubsystemDims::single(k).concat(first.out_dims());
        Channel::from_parts(
            first.in_dims().clone(),
            out,
            ops,
            ChannelStructure::Flagged {
                branches: self.branches.clone(),
                flag_factor: Some(0),
            },
        )
    }
}

/// `Σ p_i |i><i| ⊗ N_i`, with the flag as the first output factor.
pub fn flagged(branches: Vec<(f64, Channel)>) -> Result<Channel> {
    Ok(FlaggedChannel::new(branches)?.to_channel())
}

/// Tensor product `a ⊗ b`; factors are concatenated. Flag metadata
/// propagates to product branches.
pub fn tensor(a: &Channel, b: &Channel) -> Channel {
    let mut ops = Vec::with_capacity(a.kraus().len() * b.kraus().len());
    for ka in a.kraus() {
        for kb in b.kraus() {
            ops.push(ka.kron(kb));
        }
    }
    let structure = match (a.structure(), b.structure()) {
        (ChannelStructure::Flagged { branches, flag_factor }, _) => ChannelStructure::Flagged {
            branches: branches.iter().map(|(p, ch)| (*p, tensor(ch, b))).collect(),
            flag_factor: *flag_factor,
        },
        (_, ChannelStructure::Flagged { branches, flag_factor }) => ChannelStructure::Flagged {
            branches: branches.iter().map(|(p, ch)| (*p, tensor(a, ch))).collect(),
            flag_factor: flag_factor.map(|f| a.out_dims().len() + f),
        },
        _ => ChannelStructure::Plain,
    };
    Channel::from_parts(
        a.in_dims().concat(b.in_dims()),
        a.out_dims().concat(b.out_dims()),
        ops,
        structure,
    )
    .pruned()
}

/// `n`-fold tensor power.
pub fn tensor_power(ch: &Channel, n: usize) -> Result<Channel> {
    if n == 0 {
        return Err(Error::Domain("tensor power needs n >= 1".into()));
    }
    let mut out = ch.clone();
    for _ in 1..n {
        out = tensor(&out, ch);
    }
    Ok(out)
}

/// Direct sum `a ⊕ b`: block-diagonal action that annihilates off-diagonal
/// blocks of the input.
pub fn direct_sum(a: &Channel, b: &Channel) -> Channel {
    let (ai, ao, bi, bo) = (a.in_dim(), a.out_dim(), b.in_dim(), b.out_dim());
    let mut ops = Vec::with_capacity(a.kraus().len() + b.kraus().len());
    for k in a.kraus() {
        let mut m = ComplexMatrix::zeros(ao + bo, ai + bi);
        m.set_block(0, 0, k);
        ops.push(m);
    }
    for k in b.kraus() {
        let mut m = ComplexMatrix::zeros(ao + bo, ai + bi);
        m.set_block(ao, ai, k);
        ops.push(m);
    }
    let blocks = |c: &Channel| match c.structure() {
        ChannelStructure::DirectSum { blocks } => blocks.clone(),
        _ => vec![(c.in_dims().clone(), c.out_dims().clone())],
    };
    let mut all = blocks(a);
    all.extend(blocks(b));
    Channel::from_parts(
        SubsystemDims::single(ai + bi),
        SubsystemDims::single(ao + bo),
        ops,
        ChannelStructure::DirectSum { blocks: all },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing_channel, erasure_flagged, identity_channel};
    use crate::matcore::C64;
    use crate::random::{random_channel, random_density};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn direct_sum_kills_off_diagonal() {
        let id1 = identity_channel(SubsystemDims::single(1));
        let ch = direct_sum(&id1, &id1);
        let mut x = ComplexMatrix::from_diag(&[0.3, 0.7]);
        x[(0, 1)] = C64::new(0.2, 0.1);
        x[(1, 0)] = C64::new(0.2, -0.1);
        let out = ch.apply_matrix(&x).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::from_diag(&[0.3, 0.7])) < 1e-15);
        assert!(ch.trace_preservation_error() < 1e-14);
        match ch.structure() {
            ChannelStructure::DirectSum { blocks } => assert_eq!(blocks.len(), 2),
            _ => panic!("missing block metadata"),
        }
    }

    #[test]
    fn tensor_of_identities() {
        let a = identity_channel(SubsystemDims::single(2));
        let b = identity_channel(SubsystemDims::single(3));
        let t = tensor(&a, &b);
        assert_eq!(t.kraus().len(), 1);
        assert_eq!(t.kraus()[0], ComplexMatrix::identity(6));
        assert_eq!(t.in_dims().factors(), &[2, 3]);
    }

    #[test]
    fn flagged_structure_and_probabilities() {
        let kappa = 0.3;
        let gamma = depolarizing_channel(0.2, 2).unwrap();
        let erase = crate::channels::replacement_channel(
            &crate::states::DensityOperator::basis(0, SubsystemDims::single(2)),
            2,
        )
        .unwrap();
        let ch = flagged(vec![(1.0 - kappa, gamma), (kappa, erase)]).unwrap();
        assert_eq!(ch.out_dims().factors(), &[2, 2]);
        assert!(ch.trace_preservation_error() < 1e-12);
        let rho = random_density(&mut ChaCha8Rng::seed_from_u64(1), 2, 2);
        let out = ch.apply_matrix(rho.matrix()).unwrap();
        let flag = crate::matcore::partial_trace(&out, ch.out_dims(), &[1]).unwrap();
        assert!(flag.max_abs_diff(&ComplexMatrix::from_diag(&[0.7, 0.3])) < 1e-14);
        match ch.structure() {
            ChannelStructure::Flagged { branches, flag_factor } => {
                assert_eq!(*flag_factor, Some(0));
                assert!((branches[1].0 - kappa).abs() < 1e-15);
            }
            _ => panic!("missing flag metadata"),
        }
    }

    #[test]
    fn flagged_rejects_bad_weights() {
        let id = identity_channel(SubsystemDims::single(2));
        assert!(flagged(vec![(0.5, id.clone()), (0.6, id.clone())]).is_err());
        assert!(flagged(vec![(1.5, id.clone()), (-0.5, id.clone())]).is_err());
        let other = identity_channel(SubsystemDims::single(3));
        assert!(flagged(vec![(0.5, id), (0.5, other)]).is_err());
        assert!(flagged(vec![]).is_err());
    }

    #[test]
    fn tensor_propagates_flags() {
        let e = erasure_flagged(0.4, 2).unwrap();
        let id = identity_channel(SubsystemDims::single(3));
        let t = tensor(&id, &e);
        match t.structure() {
            ChannelStructure::Flagged { branches, flag_factor } => {
                assert_eq!(*flag_factor, Some(1));
                assert_eq!(branches.len(), 2);
                assert_eq!(branches[0].1.in_dim(), 6);
            }
            _ => panic!("flag lost"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn combinators_preserve_trace(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_channel(&mut rng, 2, 3, 2);
            let b = random_channel(&mut rng, 3, 2, 3);
            prop_assert!(tensor(&a, &b).trace_preservation_error() < 1e-9);
            prop_assert!(direct_sum(&a, &b).trace_preservation_error() < 1e-9);
            let c = random_channel(&mut rng, 2, 3, 1);
            let f = flagged(vec![(0.25, a.clone()), (0.75, c)]).unwrap();
            prop_assert!(f.trace_preservation_error() < 1e-9);
            prop_assert!(tensor_power(&a, 2).unwrap().trace_preservation_error() < 1e-9);
        }

        #[test]
        fn tensor_acts_on_products(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_channel(&mut rng, 2, 2, 2);
            let b = random_channel(&mut rng, 3, 2, 2);
            let x = random_density(&mut rng, 2, 2);
            let y = random_density(&mut rng, 3, 3);
            let lhs = tensor(&a, &b).apply_matrix(&x.matrix().kron(y.matrix())).unwrap();
            let rhs = a.apply_matrix(x.matrix()).unwrap().kron(&b.apply_matrix(y.matrix()).unwrap());
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }
}
