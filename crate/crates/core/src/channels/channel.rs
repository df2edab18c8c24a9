use crate::error::{Error, Result};
use crate::matcore::eigen::eig_hermitian;
use crate::matcore::matrix::ZERO;
use crate::matcore::{operator_norm, partial_trace, ComplexMatrix, SubsystemDims, C64};
use crate::states::DensityOperator;

/// Trace-preservation tolerance in operator norm.
pub const TP_TOLERANCE: f64 = 1e-9;

/// Kraus operators with norm below this are dropped after Choi inversion.
pub const KRAUS_PRUNE: f64 = 1e-12;

/// Extra structure a channel may carry so that entropic quantities can be
/// evaluated exactly, branch by branch.
#[derive(Clone, Debug)]
pub enum ChannelStructure {
    Plain,
    /// Mixture of branch channels behind an orthogonal classical flag.
    /// `flag_factor` is the output factor holding the flag, or `None` when
    /// the branch outputs live on orthogonal subspaces of one register.
    Flagged {
        branches: Vec<(f64, Channel)>,
        flag_factor: Option<usize>,
    },
    /// Block-diagonal action; each entry is the `(input, output)` size of a
    /// summand, in order.
    DirectSum { blocks: Vec<(SubsystemDims, SubsystemDims)> },
}

/// A completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct Channel {
    in_dims: SubsystemDims,
    out_dims: SubsystemDims,
    kraus: Vec<ComplexMatrix>,
    structure: ChannelStructure,
}

impl Channel {
    /// Validates shapes and trace preservation `Σ K†K = I`.
    pub fn new(
        in_dims: SubsystemDims,
        out_dims: SubsystemDims,
        kraus: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::NotAChannel("empty Kraus list".into()));
        }
        let (din, dout) = (in_dims.total(), out_dims.total());
        for (k, op) in kraus.iter().enumerate() {
            if op.rows() != dout || op.cols() != din {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {k} is {}x{}, expected {dout}x{din}",
                    op.rows(),
                    op.cols()
                )));
            }
        }
        let ch = Self::from_parts(in_dims, out_dims, kraus, ChannelStructure::Plain);
        let err = ch.trace_preservation_error();
        if err > TP_TOLERANCE {
            return Err(Error::NotAChannel(format!(
                "Σ K†K deviates from identity by {err:e}"
            )));
        }
        Ok(ch)
    }

    pub(crate) fn from_parts(
        in_dims: SubsystemDims,
        out_dims: SubsystemDims,
        kraus: Vec<ComplexMatrix>,
        structure: ChannelStructure,
    ) -> Self {
        Self {
            in_dims,
            out_dims,
            kraus,
            structure,
        }
    }

    pub(crate) fn with_structure(mut self, structure: ChannelStructure) -> Self {
        self.structure = structure;
        self
    }

    pub fn in_dims(&self) -> &SubsystemDims {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &SubsystemDims {
        &self.out_dims
    }

    pub fn in_dim(&self) -> usize {
        self.in_dims.total()
    }

    pub fn out_dim(&self) -> usize {
        self.out_dims.total()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Environment dimension of the Kraus representation.
    pub fn env_dim(&self) -> usize {
        self.kraus.len()
    }

    pub fn structure(&self) -> &ChannelStructure {
        &self.structure
    }

    /// Relabels the input and output factorizations (same totals).
    pub fn with_dims(mut self, in_dims: SubsystemDims, out_dims: SubsystemDims) -> Result<Self> {
        if in_dims.total() != self.in_dim() || out_dims.total() != self.out_dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot relabel {:?}->{:?} as {:?}->{:?}",
                self.in_dims.factors(),
                self.out_dims.factors(),
                in_dims.factors(),
                out_dims.factors()
            )));
        }
        self.in_dims = in_dims;
        self.out_dims = out_dims;
        Ok(self)
    }

    /// `‖Σ K†K − I‖_op`.
    pub fn trace_preservation_error(&self) -> f64 {
        let n = self.in_dim();
        let mut s = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            s = &s + &k.adjoint_mul(k);
        }
        operator_norm(&(&s - &ComplexMatrix::identity(n)))
    }

    fn check_input(&self, x: &ComplexMatrix) -> Result<()> {
        if x.rows() != self.in_dim() || x.cols() != self.in_dim() {
            return Err(Error::DimensionMismatch(format!(
                "input {}x{} for channel on dimension {}",
                x.rows(),
                x.cols(),
                self.in_dim()
            )));
        }
        Ok(())
    }

    /// `Σ K X K†` for any square `X` of the input dimension.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(x)?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let d = self.out_dim();
        let mut out = ComplexMatrix::zeros(d, d);
        for k in &self.kraus {
            out = &out + &k.mul_unchecked(x).mul_adjoint(k);
        }
        out
    }

    /// Output state `N(ρ)`.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let out = self.apply_matrix(rho.matrix())?;
        Ok(DensityOperator::new_unchecked(
            out.hermitian_part(),
            self.out_dims.clone(),
        ))
    }

    /// Channel output and complementary output `(N(X), N^c(X))`, with
    /// `N^c(X)_{kk'} = tr(K_k X K_{k'}†)`.
    pub fn outputs(&self, x: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
        self.check_input(x)?;
        Ok(self.outputs_unchecked(x))
    }

    pub(crate) fn outputs_unchecked(&self, x: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
        let d = self.out_dim();
        let r = self.kraus.len();
        let kx: Vec<ComplexMatrix> = self.kraus.iter().map(|k| k.mul_unchecked(x)).collect();
        let mut b = ComplexMatrix::zeros(d, d);
        for (a, k) in kx.iter().zip(&self.kraus) {
            b = &b + &a.mul_adjoint(k);
        }
        let mut e = ComplexMatrix::zeros(r, r);
        for i in 0..r {
            for j in i..r {
                let v = self.kraus[j].inner(&kx[i]);
                e[(i, j)] = v;
                e[(j, i)] = v.conj();
            }
        }
        (b.hermitian_part(), e)
    }

    /// Unnormalized Choi operator `Ĵ = Σ_{ij} |i><j| ⊗ N(|i><j|)`, ordered
    /// `[input factors, output factors]`.
    pub fn unnormalized_choi(&self) -> ComplexMatrix {
        let (din, dout) = (self.in_dim(), self.out_dim());
        let n = din * dout;
        let mut j = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            // vectorization |K>> = Σ_i |i> ⊗ K|i>
            let v: Vec<C64> = (0..din)
                .flat_map(|i| (0..dout).map(move |b| (i, b)))
                .map(|(i, b)| k[(b, i)])
                .collect();
            for (x, &vx) in v.iter().enumerate() {
                if vx == ZERO {
                    continue;
                }
                for (y, &vy) in v.iter().enumerate() {
                    j[(x, y)] += vx * vy.conj();
                }
            }
        }
        j
    }

    /// Normalized Choi state `J = Ĵ / d_A`, factors `[input, output]`.
    pub fn choi(&self) -> DensityOperator {
        let j = self.unnormalized_choi().scale(1.0 / self.in_dim() as f64);
        DensityOperator::new_unchecked(j.hermitian_part(), self.in_dims.concat(&self.out_dims))
    }

    /// Complementary channel with environment basis indexed by Kraus
    /// operators: `E_b = Σ_k |k><b| K_k`.
    pub fn complementary(&self) -> Channel {
        let r = self.kraus.len();
        let din = self.in_dim();
        let ops = (0..self.out_dim())
            .map(|b| ComplexMatrix::from_fn(r, din, |k, i| self.kraus[k][(b, i)]))
            .collect();
        Self::from_parts(
            self.in_dims.clone(),
            SubsystemDims::single(r),
            ops,
            ChannelStructure::Plain,
        )
        .pruned()
    }

    /// Sequential composition `second ∘ first`.
    pub fn compose(second: &Channel, first: &Channel) -> Result<Channel> {
        if first.out_dim() != second.in_dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot feed output {} into input {}",
                first.out_dim(),
                second.in_dim()
            )));
        }
        let mut ops = Vec::with_capacity(first.kraus.len() * second.kraus.len());
        for b in &second.kraus {
            for a in &first.kraus {
                ops.push(b.mul_unchecked(a));
            }
        }
        Ok(Self::from_parts(
            first.in_dims.clone(),
            second.out_dims.clone(),
            ops,
            ChannelStructure::Plain,
        )
        .pruned())
    }

    /// Drops Kraus operators with Frobenius norm below `KRAUS_PRUNE`.
    pub(crate) fn pruned(mut self) -> Self {
        let keep: Vec<ComplexMatrix> = self
            .kraus
            .iter()
            .filter(|k| k.frobenius_norm() >= KRAUS_PRUNE)
            .cloned()
            .collect();
        if !keep.is_empty() {
            self.kraus = keep;
        } else {
            self.kraus.truncate(1);
        }
        self
    }

    /// Channel whose normalized Choi state is `j`, with `d_in` input
    /// dimension.
    ///
    /// Kraus operators are `K_k = √(d λ_k) Σ c^k_{ib} |b><i|` from the
    /// eigenpairs of `j`. The input factorization is read off the leading
    /// factors of `j.dims()` when they multiply to `d_in`.
    pub fn from_choi(j: &DensityOperator, d_in: usize) -> Result<Channel> {
        let n = j.dim();
        if d_in == 0 || n % d_in != 0 {
            return Err(Error::DimensionMismatch(format!(
                "Choi dimension {n} not divisible by input dimension {d_in}"
            )));
        }
        let d_out = n / d_in;
        let (in_dims, out_dims) = split_dims(j.dims(), d_in, d_out);
        let pair = SubsystemDims::new(vec![d_in, d_out])?;
        let marg = partial_trace(j.matrix(), &pair, &[1])?;
        let target = ComplexMatrix::identity(d_in).scale(1.0 / d_in as f64);
        let dev = marg.max_abs_diff(&target);
        if dev > 1e-9 {
            return Err(Error::NotAChannel(format!(
                "input marginal deviates from I/d by {dev:e}"
            )));
        }
        let (vals, vecs) = eig_hermitian(j.matrix())?;
        if let Some(&low) = vals.last() {
            if low < -1e-9 * n as f64 {
                return Err(Error::NotAChannel(format!(
                    "Choi operator has eigenvalue {low:e}"
                )));
            }
        }
        let cut = 1e-13 * vals[0].max(1e-300);
        let mut ops = Vec::new();
        for (k, &l) in vals.iter().enumerate() {
            if l <= cut {
                continue;
            }
            let w = (d_in as f64 * l).sqrt();
            ops.push(ComplexMatrix::from_fn(d_out, d_in, |b, i| {
                vecs[(i * d_out + b, k)] * w
            }));
        }
        Ok(Self::from_parts(in_dims, out_dims, ops, ChannelStructure::Plain).pruned())
    }

    /// Choi-based reconstruction `d_A tr_A[J (X^T ⊗ I)]`, used to cross-check
    /// the Kraus action.
    pub fn apply_via_choi(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(x)?;
        let (din, dout) = (self.in_dim(), self.out_dim());
        let j = self.choi().into_matrix();
        let prod = &j * &x.transpose().kron(&ComplexMatrix::identity(dout));
        let pair = SubsystemDims::new(vec![din, dout])?;
        Ok(partial_trace(&prod, &pair, &[0])?.scale(din as f64))
    }
}

fn split_dims(dims: &SubsystemDims, d_in: usize, d_out: usize) -> (SubsystemDims, SubsystemDims) {
    let f = dims.factors();
    let mut acc = 1;
    for k in 0..f.len() {
        acc *= f[k];
        if acc == d_in && k + 1 < f.len() {
            return (
                SubsystemDims::new(f[..=k].to_vec()).expect("positive"),
                SubsystemDims::new(f[k + 1..].to_vec()).expect("positive"),
            );
        }
    }
    (SubsystemDims::single(d_in), SubsystemDims::single(d_out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_channel, random_density};
    use crate::states::max_entangled;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_non_trace_preserving() {
        let d = SubsystemDims::single(2);
        assert!(matches!(
            Channel::new(d.clone(), d.clone(), vec![ComplexMatrix::identity(2).scale(0.5)]),
            Err(Error::NotAChannel(_))
        ));
        assert!(Channel::new(d.clone(), d.clone(), vec![]).is_err());
        assert!(matches!(
            Channel::new(d.clone(), d, vec![ComplexMatrix::identity(3)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn identity_choi_is_bell_state() {
        let d = SubsystemDims::single(2);
        let id = Channel::new(d.clone(), d, vec![ComplexMatrix::identity(2)]).unwrap();
        let expected = ComplexMatrix::projector(&max_entangled(2));
        assert!(id.choi().matrix().max_abs_diff(&expected) < 1e-15);
        assert!(id.unnormalized_choi().max_abs_diff(&expected.scale(2.0)) < 1e-15);
    }

    #[test]
    fn identity_from_bell_choi() {
        let j = DensityOperator::pure(&max_entangled(3), SubsystemDims::new(vec![3, 3]).unwrap())
            .unwrap();
        let ch = Channel::from_choi(&j, 3).unwrap();
        assert_eq!(ch.env_dim(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density(&mut rng, 3, 3);
        let out = ch.apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn from_choi_rejects_bad_marginal() {
        let j = DensityOperator::basis(0, SubsystemDims::new(vec![2, 2]).unwrap());
        assert!(matches!(Channel::from_choi(&j, 2), Err(Error::NotAChannel(_))));
    }

    #[test]
    fn complement_of_identity_is_trace() {
        let d = SubsystemDims::single(3);
        let id = Channel::new(d.clone(), d, vec![ComplexMatrix::identity(3)]).unwrap();
        let c = id.complementary();
        assert_eq!(c.out_dim(), 1);
        assert!(c.trace_preservation_error() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn choi_marginal_and_roundtrip(seed in any::<u64>(), din in 1usize..4, dout in 1usize..4, r in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ch = random_channel(&mut rng, din, dout, r);
            let j = ch.choi();
            let pair = SubsystemDims::new(vec![din, dout]).unwrap();
            let marg = partial_trace(j.matrix(), &pair, &[1]).unwrap();
            prop_assert!(marg.max_abs_diff(&ComplexMatrix::identity(din).scale(1.0 / din as f64)) < 1e-10);
            let back = Channel::from_choi(&j, din).unwrap();
            prop_assert!(back.choi().matrix().max_abs_diff(j.matrix()) < 1e-9);
            prop_assert!(back.env_dim() <= ch.env_dim().min(din * dout));
        }

        #[test]
        fn kraus_action_matches_choi_action(seed in any::<u64>(), din in 1usize..4, dout in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ch = random_channel(&mut rng, din, dout, 3);
            let rho = random_density(&mut rng, din, din);
            let a = ch.apply_matrix(rho.matrix()).unwrap();
            let b = ch.apply_via_choi(rho.matrix()).unwrap();
            prop_assert!(a.max_abs_diff(&b) < 1e-9);
        }

        #[test]
        fn outputs_match_complementary_channel(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ch = random_channel(&mut rng, 3, 2, 4);
            let rho = random_density(&mut rng, 3, 3);
            let (b, e) = ch.outputs(rho.matrix()).unwrap();
            prop_assert!(b.max_abs_diff(&ch.apply_matrix(rho.matrix()).unwrap()) < 1e-12);
            let ce = ch.complementary().apply_matrix(rho.matrix()).unwrap();
            prop_assert!(e.max_abs_diff(&ce) < 1e-12);
            prop_assert!(ch.complementary().trace_preservation_error() < 1e-9);
        }

        #[test]
        fn composition_is_trace_preserving(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_channel(&mut rng, 2, 3, 2);
            let b = random_channel(&mut rng, 3, 2, 3);
            let c = Channel::compose(&b, &a).unwrap();
            prop_assert!(c.trace_preservation_error() < 1e-9);
            let rho = random_density(&mut rng, 2, 2);
            let direct = b.apply_matrix(&a.apply_matrix(rho.matrix()).unwrap()).unwrap();
            prop_assert!(c.apply_matrix(rho.matrix()).unwrap().max_abs_diff(&direct) < 1e-12);
            prop_assert!(Channel::compose(&a, &a).is_err());
        }
    }
}
