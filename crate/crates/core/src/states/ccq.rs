use crate::error::{Error, Result};
use crate::matcore::{purify, trace_norm, ComplexMatrix, SubsystemDims};
use crate::states::DensityOperator;

/// Key probabilities below this are treated as impossible outcomes.
const NULL_PROBABILITY: f64 = 1e-13;

/// Classical-classical-quantum state `Σ p_ij |ij><ij| ⊗ ρ^E_ij` left after
/// measuring both key registers.
#[derive(Clone, Debug)]
pub struct CcqState {
    probs: Vec<Vec<f64>>,
    eve: Vec<Vec<DensityOperator>>,
}

impl CcqState {
    pub fn new(probs: Vec<Vec<f64>>, eve: Vec<Vec<DensityOperator>>) -> Result<Self> {
        let d0 = probs.len();
        if d0 == 0
            || probs.iter().any(|r| r.len() != d0)
            || eve.len() != d0
            || eve.iter().any(|r| r.len() != d0)
        {
            return Err(Error::DimensionMismatch("ccq tables must be d0 x d0".into()));
        }
        let total: f64 = probs.iter().flatten().sum();
        if probs.iter().flatten().any(|&p| p < 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotAState(format!("key distribution sums to {total}")));
        }
        Ok(Self { probs, eve })
    }

    pub fn key_dim(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.probs[i][j]
    }

    pub fn probs(&self) -> &[Vec<f64>] {
        &self.probs
    }

    pub fn eve_state(&self, i: usize, j: usize) -> &DensityOperator {
        &self.eve[i][j]
    }
}

/// Measures the key registers of a purification of `gamma` in the
/// computational basis and traces out the shield.
///
/// `gamma` must have factors `[d0, d0, shield...]`. Eve's conditional states
/// live on the purifying system; for outcomes of zero probability they are
/// set to the maximally mixed state.
pub fn key_ccq(gamma: &DensityOperator, d0: usize) -> Result<CcqState> {
    let f = gamma.dims().factors();
    if f.len() < 2 || f[0] != d0 || f[1] != d0 {
        return Err(Error::DimensionMismatch(format!(
            "expected key factors [{d0}, {d0}, ..], got {f:?}"
        )));
    }
    let shield = gamma.dim() / (d0 * d0);
    let (psi, e) = purify(gamma)?;
    let block = shield * e;
    let mut probs = vec![vec![0.0; d0]; d0];
    let mut eve = Vec::with_capacity(d0);
    for i in 0..d0 {
        let mut row = Vec::with_capacity(d0);
        for j in 0..d0 {
            let phi = &psi[(i * d0 + j) * block..(i * d0 + j + 1) * block];
            let p: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
            probs[i][j] = p;
            let dims = SubsystemDims::single(e);
            if p <= NULL_PROBABILITY {
                row.push(DensityOperator::maximally_mixed(dims));
                continue;
            }
            // tr_shield |φ><φ| with φ reshaped as a shield x env matrix M: M^T conj(M)
            let rho = ComplexMatrix::from_fn(e, e, |a, b| {
                (0..shield)
                    .map(|s| phi[s * e + a] * phi[s * e + b].conj())
                    .sum()
            });
            row.push(DensityOperator::new_unchecked(rho.scale(1.0 / p), dims));
        }
        eve.push(row);
    }
    let total: f64 = probs.iter().flatten().sum();
    for row in &mut probs {
        for p in row.iter_mut() {
            *p /= total;
        }
    }
    CcqState::new(probs, eve)
}

/// True when Eve's states for every outcome with `p_ij > tol` agree within
/// `tol` in (unhalved) trace norm.
pub fn is_secure(ccq: &CcqState, tol: f64) -> bool {
    let d0 = ccq.key_dim();
    let live: Vec<(usize, usize)> = (0..d0)
        .flat_map(|i| (0..d0).map(move |j| (i, j)))
        .filter(|&(i, j)| ccq.prob(i, j) > tol)
        .collect();
    let Some(&(i0, j0)) = live.first() else {
        return true;
    };
    let reference = ccq.eve_state(i0, j0).matrix();
    live.iter()
        .all(|&(i, j)| trace_norm(&(ccq.eve_state(i, j).matrix() - reference)) <= tol)
}

/// Secure, with uniform perfectly correlated key: `p_ii = 1/d0` and
/// `p_ij ≈ 0` for `i ≠ j`.
pub fn is_perfect_pdit(ccq: &CcqState, tol: f64) -> bool {
    let d0 = ccq.key_dim();
    let uniform = 1.0 / d0 as f64;
    for i in 0..d0 {
        for j in 0..d0 {
            let p = ccq.prob(i, j);
            let ok = if i == j {
                (p - uniform).abs() <= tol
            } else {
                p <= tol
            };
            if !ok {
                return false;
            }
        }
    }
    is_secure(ccq, tol)
}
