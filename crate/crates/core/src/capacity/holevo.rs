use crate::channels::{identity_channel, tensor, Channel};
use crate::error::{check_dimension, check_probability, Error, Result};
use crate::matcore::entropy::h;
use crate::matcore::{von_neumann_entropy, SubsystemDims};
use crate::states::{d_asym, d_sym, sym_asym_projectors, DensityOperator};

/// A finite ensemble `{p_x, ρ_x}` of states with identical factors.
#[derive(Clone, Debug)]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        if probs.is_empty() || probs.len() != states.len() {
            return Err(Error::Domain(format!(
                "{} probabilities for {} states",
                probs.len(),
                states.len()
            )));
        }
        for &p in &probs {
            check_probability("p", p)?;
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("probabilities sum to {total}")));
        }
        let dims = states[0].dims();
        if states.iter().any(|s| s.dims() != dims) {
            return Err(Error::DimensionMismatch("ensemble states differ in dims".into()));
        }
        Ok(Self { probs, states })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn average(&self) -> Result<DensityOperator> {
        let refs: Vec<&DensityOperator> = self.states.iter().collect();
        DensityOperator::mixture(&self.probs, &refs)
    }

    /// The ensemble of channel outputs `{p_x, N(ρ_x)}`.
    pub fn push_through(&self, ch: &Channel) -> Result<Ensemble> {
        let states = self.states.iter().map(|s| ch.apply(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            probs: self.probs.clone(),
            states,
        })
    }
}

/// Holevo information `S(Σ p_x ρ_x) − Σ p_x S(ρ_x)` in bits.
pub fn holevo(ens: &Ensemble) -> Result<f64> {
    let mut avg = von_neumann_entropy(&ens.average()?)?;
    for (p, s) in ens.probs.iter().zip(&ens.states) {
        if *p > 0.0 {
            avg -= p * von_neumann_entropy(s)?;
        }
    }
    Ok(avg.max(0.0))
}

/// Private information `I(X;B) − I(X;E)` of the classical-quantum
/// extension `Σ p_x |x><x| ⊗ ρ_x` sent through `ch` and its complement.
pub fn private_info(ens: &Ensemble, ch: &Channel) -> Result<f64> {
    if ens.states[0].dim() != ch.in_dim() {
        return Err(Error::DimensionMismatch(format!(
            "ensemble of dimension {} for channel input {}",
            ens.states[0].dim(),
            ch.in_dim()
        )));
    }
    let bob = holevo(&ens.push_through(ch)?)?;
    let eve = holevo(&ens.push_through(&ch.complementary())?)?;
    Ok(bob - eve)
}

/// `J_sym = (M ⊗ id)(P_sym)/d_sym` and `J_asym = (M ⊗ id)(P_asym)/d_asym`,
/// with factors `[M output factors…, d]`.
pub fn j_sym_asym(m: &Channel, d: usize) -> Result<(DensityOperator, DensityOperator)> {
    check_dimension("d", d, 2)?;
    if m.in_dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "assisting channel has input dimension {}, expected {d}",
            m.in_dim()
        )));
    }
    let (ps, pa, _) = sym_asym_projectors(d)?;
    let ext = tensor(m, &identity_channel(SubsystemDims::single(d)));
    let js = ext.apply_matrix(&ps.scale(1.0 / d_sym(d) as f64))?;
    let ja = ext.apply_matrix(&pa.scale(1.0 / d_asym(d) as f64))?;
    let dims = ext.out_dims().clone();
    Ok((
        DensityOperator::new_unchecked(js.hermitian_part(), dims.clone()),
        DensityOperator::new_unchecked(ja.hermitian_part(), dims),
    ))
}

/// `1 − h(q) + χ({q: J_sym, 1−q: J_asym})`, a lower bound on
/// `Q^(1)(N_{q,d} ⊗ M)`.
pub fn amplification_lower_bound(m: &Channel, q: f64, d: usize) -> Result<f64> {
    check_probability("q", q)?;
    let (js, ja) = j_sym_asym(m, d)?;
    let chi = holevo(&Ensemble::new(vec![q, 1.0 - q], vec![js, ja])?)?;
    Ok(1.0 - h(q) + chi)
}

/// Closed form of `χ({q: J_sym, 1−q: J_asym})` for the erasure channel,
/// `(1−λ) h(q)`.
pub fn erasure_holevo(q: f64, lambda: f64) -> Result<f64> {
    check_probability("q", q)?;
    check_probability("lambda", lambda)?;
    Ok((1.0 - lambda) * h(q))
}

/// Closed form of `χ({q: J_sym, 1−q: J_asym})` for the depolarizing
/// channel: `h((1−p)q + p(1+1/d)/2) − q h(1 − p(1−1/d)/2) − (1−q) h(p(1+1/d)/2)`.
pub fn depolarizing_holevo(q: f64, p: f64, d: usize) -> Result<f64> {
    check_probability("q", q)?;
    check_probability("p", p)?;
    check_dimension("d", d, 2)?;
    let inv = 1.0 / d as f64;
    let plus = 0.5 * p * (1.0 + inv);
    let minus = 0.5 * p * (1.0 - inv);
    Ok(h((1.0 - p) * q + plus) - q * h(1.0 - minus) - (1.0 - q) * h(plus))
}
