use crate::error::{check_dimension, check_probability, Error, Result};
use crate::matcore::entropy::h;
use crate::matcore::C64;

/// Parameters of an approximate private channel assisted by erasure
/// noise. `epsilon` is the unhalved trace distance of the Choi state to a
/// pbit whose key overlap is `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxPrivateParams {
    pub epsilon: f64,
    pub c: C64,
    pub d: usize,
    pub lambda: f64,
    pub kappa: f64,
    /// Number of erasure copies in the multi-copy construction.
    pub big_n: usize,
    /// Tensor power at which additivity is enforced.
    pub n: usize,
}

impl ApproxPrivateParams {
    pub fn new(epsilon: f64, c: C64, d: usize, lambda: f64) -> Self {
        Self {
            epsilon,
            c,
            d,
            lambda,
            kappa: 0.0,
            big_n: 1,
            n: 1,
        }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_copies(mut self, big_n: usize) -> Self {
        self.big_n = big_n;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Domain(format!("epsilon = {} must be nonnegative", self.epsilon)));
        }
        if !(self.c.norm() <= 1.0 + 1e-12) {
            return Err(Error::Domain(format!("|c| = {} exceeds 1", self.c.norm())));
        }
        check_probability("lambda", self.lambda)?;
        check_probability("kappa", self.kappa)?;
        check_dimension("d", self.d, 2)?;
        check_dimension("N", self.big_n, 1)?;
        check_dimension("n", self.n, 1)?;
        Ok(())
    }

    /// `h((1+|c|)/2)`.
    pub fn overlap_entropy(&self) -> f64 {
        h(((1.0 + self.c.norm()) / 2.0).min(1.0))
    }

    fn epsilon_penalty(&self) -> Result<f64> {
        if self.epsilon > 0.5 {
            return Err(Error::Domain(format!(
                "epsilon = {} is outside [0, 1/2]",
                self.epsilon
            )));
        }
        Ok(4.0 * self.epsilon + 2.0 * h(self.epsilon))
    }
}

/// `Δ(λ, ε, c) = 1 − λ h((1+|c|)/2) − 4ε − 2h(ε)`, a lower bound on
/// `Q^(1)(M ⊗ E_{λ,d})`. Negative values carry no claim.
pub fn approx_private_lower_bound(p: &ApproxPrivateParams) -> Result<f64> {
    p.validate()?;
    Ok(1.0 - p.lambda * p.overlap_entropy() - p.epsilon_penalty()?)
}

/// `1 − λ^N h((1+|c|)/2) − 4ε − 2h(ε)` for `N` erasure copies.
pub fn n_copy_lower_bound(p: &ApproxPrivateParams) -> Result<f64> {
    p.validate()?;
    let lambda_n = p.lambda.powi(exponent(p.big_n)?);
    Ok(1.0 - lambda_n * p.overlap_entropy() - p.epsilon_penalty()?)
}

fn exponent(n: usize) -> Result<i32> {
    i32::try_from(n).map_err(|_| Error::Domain(format!("exponent {n} is too large")))
}

/// `g(x) = 8x log₂(2d(d+1)) + 4h(x)`, strictly increasing on `[0, 1/2]`.
pub fn continuity_g(x: f64, d: usize) -> f64 {
    let df = d as f64;
    8.0 * x * (2.0 * df * (df + 1.0)).log2() + 4.0 * h(x.clamp(0.0, 1.0))
}

/// Inverse of [`continuity_g`] on `[0, 1/2]` by bisection to `1e-12`;
/// clamps to the interval ends outside the range of `g`.
pub fn continuity_g_inverse(y: f64, d: usize) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y >= continuity_g(0.5, d) {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0, 0.5);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if continuity_g(mid, d) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `min{g⁻¹(Δ), 1/2}`, a lower bound on the diamond distance from the
/// channel to the anti-degradable set; zero when `Δ ≤ 0`.
pub fn separation_lower_bound(p: &ApproxPrivateParams) -> Result<f64> {
    let delta = approx_private_lower_bound(p)?;
    if delta <= 0.0 {
        return Ok(0.0);
    }
    Ok(continuity_g_inverse(delta, p.d).min(0.5))
}

/// `1 − 2h(ε) − 4ε − κ/(1−κ)`, the quantity that must stay positive for
/// superactivation.
pub fn superactivation_slack(epsilon: f64, kappa: f64) -> f64 {
    1.0 - 2.0 * h(epsilon.clamp(0.0, 1.0)) - 4.0 * epsilon - kappa / (1.0 - kappa)
}

/// Smallest integer `N ≥ 1` strictly above
/// `[log(1 − 2h(ε) − 4ε − κ/(1−κ)) − log h((1+|c|)/2)] / log λ`.
/// The logarithm base cancels in the ratio.
pub fn superactivation_n_threshold(p: &ApproxPrivateParams) -> Result<usize> {
    p.validate()?;
    if !(p.kappa > 0.0 && p.kappa < 1.0) {
        return Err(Error::InfeasibleParams(format!("kappa = {} is not in (0, 1)", p.kappa)));
    }
    if !(p.lambda > 0.0 && p.lambda < 1.0) {
        return Err(Error::InfeasibleParams(format!("lambda = {} is not in (0, 1)", p.lambda)));
    }
    let slack = superactivation_slack(p.epsilon, p.kappa);
    if !(slack > 0.0) {
        return Err(Error::InfeasibleParams(format!(
            "1 − 2h(ε) − 4ε − κ/(1−κ) = {slack} is not positive"
        )));
    }
    let hc = p.overlap_entropy();
    if !(hc > 0.0) {
        return Err(Error::InfeasibleParams("h((1+|c|)/2) vanishes at |c| = 1".into()));
    }
    let ratio = (slack.log2() - hc.log2()) / p.lambda.log2();
    if !ratio.is_finite() || ratio >= i32::MAX as f64 {
        return Err(Error::InfeasibleParams(format!("threshold {ratio} is not representable")));
    }
    Ok(if ratio < 1.0 { 1 } else { ratio.floor() as usize + 1 })
}

/// `λ = (1 + κⁿ)^{−1/n}`, which makes every flag margin nonpositive.
pub fn additivity_lambda(kappa: f64, n: usize) -> Result<f64> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::Domain(format!("kappa = {kappa} is not in (0, 1)")));
    }
    check_dimension("n", n, 1)?;
    let nf = n as f64;
    Ok((1.0 + kappa.powi(exponent(n)?)).powf(-1.0 / nf))
}

/// `1 − λ^{n−ℓ} − κ^ℓ λ^{n−ℓ}`, the coefficient of `S(ρ^A)` in the
/// additivity bound at split `ℓ ∈ [1, n−1]`.
pub fn flag_additivity_margin(kappa: f64, lambda: f64, n: usize, ell: usize) -> Result<f64> {
    check_probability("kappa", kappa)?;
    check_probability("lambda", lambda)?;
    if ell == 0 || ell >= n {
        return Err(Error::Domain(format!("ell = {ell} is not in [1, {}]", n.saturating_sub(1))));
    }
    let lam = lambda.powi(exponent(n - ell)?);
    Ok(1.0 - lam - kappa.powi(exponent(ell)?) * lam)
}

/// Grid spacing for the flag probability in [`superactivation_plan`].
pub const KAPPA_GRID_STEP: f64 = 1e-4;

/// Parameters of a superactivation construction together with the
/// certificates that justify it.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperactivationPlan {
    pub kappa: f64,
    pub lambda: f64,
    pub big_n: usize,
    /// `1 − λ^{n−ℓ} − κ^ℓ λ^{n−ℓ}` for `ℓ = 1, …, n−1`; all nonpositive.
    pub additivity_margins: Vec<f64>,
    /// `(1−κ)(1 − λ^N h((1+|c|)/2) − 4ε − 2h(ε)) − κ`; positive.
    pub activation_value: f64,
}

/// Picks the largest `κ < 1/2` on a `1e-4` grid with positive
/// superactivation slack, sets `λ = (1+κⁿ)^{−1/n}` and the smallest
/// admissible `N`, then checks both certificates.
pub fn superactivation_plan(epsilon: f64, n: usize, c: C64) -> Result<SuperactivationPlan> {
    check_dimension("n", n, 1)?;
    let steps = (0.5 / KAPPA_GRID_STEP).round() as usize;
    let kappa = (1..steps)
        .rev()
        .map(|k| k as f64 * KAPPA_GRID_STEP)
        .find(|&k| superactivation_slack(epsilon, k) > 0.0)
        .ok_or_else(|| {
            Error::InfeasibleParams(format!(
                "1 − 2h(ε) − 4ε = {} leaves no room for a flag",
                superactivation_slack(epsilon, 0.0)
            ))
        })?;
    let lambda = additivity_lambda(kappa, n)?;
    let params = ApproxPrivateParams::new(epsilon, c, 2, lambda)
        .with_kappa(kappa)
        .with_n(n);
    let big_n = superactivation_n_threshold(&params)?;
    let additivity_margins = (1..n)
        .map(|ell| flag_additivity_margin(kappa, lambda, n, ell))
        .collect::<Result<Vec<_>>>()?;
    let activation_value =
        (1.0 - kappa) * n_copy_lower_bound(&params.with_copies(big_n))? - kappa;
    if additivity_margins.iter().any(|&m| m > 0.0) || !(activation_value > 0.0) {
        return Err(Error::InfeasibleParams(format!(
            "certificates fail: margins {additivity_margins:?}, activation {activation_value}"
        )));
    }
    Ok(SuperactivationPlan {
        kappa,
        lambda,
        big_n,
        additivity_margins,
        activation_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn eq66_examples() {
        let p = ApproxPrivateParams::new(0.0, c(0.5), 2, 0.9);
        let v = approx_private_lower_bound(&p).unwrap();
        assert!((v - (1.0 - 0.9 * h(0.75))).abs() < 1e-15);
        assert!((v - 0.26985).abs() < 1e-5, "{v}");
        // |c| = 1 removes the erasure penalty entirely
        for lambda in [0.1, 0.5, 0.9] {
            let p = ApproxPrivateParams::new(0.0, C64::new(0.0, 1.0), 2, lambda);
            assert!((approx_private_lower_bound(&p).unwrap() - 1.0).abs() < 1e-12);
        }
        let p = ApproxPrivateParams::new(0.1, c(0.0), 2, 0.5);
        let want = 1.0 - 0.5 - 0.4 - 2.0 * h(0.1);
        assert!((approx_private_lower_bound(&p).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn params_validation() {
        let base = ApproxPrivateParams::new(0.0, c(0.5), 2, 0.9);
        assert!(ApproxPrivateParams { epsilon: -0.1, ..base }.validate().is_err());
        assert!(ApproxPrivateParams { c: c(1.5), ..base }.validate().is_err());
        assert!(ApproxPrivateParams { lambda: 1.5, ..base }.validate().is_err());
        assert!(ApproxPrivateParams { d: 1, ..base }.validate().is_err());
        assert!(base.with_copies(0).validate().is_err());
        assert!(approx_private_lower_bound(&ApproxPrivateParams { epsilon: 0.6, ..base }).is_err());
    }

    #[test]
    fn g_inverse_round_trips() {
        for d in [2, 3, 5] {
            for y in [0.1, 0.3, 0.5] {
                let x = continuity_g_inverse(y, d);
                assert!((continuity_g(x, d) - y).abs() < 1e-9, "d={d} y={y}");
            }
            assert_eq!(continuity_g_inverse(-1.0, d), 0.0);
            assert_eq!(continuity_g_inverse(1e6, d), 0.5);
        }
        let xs: Vec<f64> = (0..=50).map(|k| continuity_g(k as f64 / 100.0, 3)).collect();
        assert!(xs.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn separation_examples() {
        let p = ApproxPrivateParams::new(0.0, c(0.5), 2, 0.5);
        let delta = approx_private_lower_bound(&p).unwrap();
        assert!((delta - 0.59436).abs() < 1e-5);
        let s = separation_lower_bound(&p).unwrap();
        assert!(s > 0.0 && s <= 0.5);
        assert!((continuity_g(s, 2) - delta).abs() < 1e-9);
        let none = ApproxPrivateParams::new(0.4, c(0.0), 2, 0.9);
        assert!(approx_private_lower_bound(&none).unwrap() <= 0.0);
        assert_eq!(separation_lower_bound(&none).unwrap(), 0.0);
    }

    #[test]
    fn n_copy_examples() {
        let p = ApproxPrivateParams::new(0.05, c(0.3), 3, 0.8);
        assert_eq!(n_copy_lower_bound(&p).unwrap(), approx_private_lower_bound(&p).unwrap());
        let q = ApproxPrivateParams::new(0.0, c(0.0), 2, 0.999667).with_copies(354);
        let v = n_copy_lower_bound(&q).unwrap();
        assert!((v - (1.0 - 0.999667f64.powi(354))).abs() < 1e-14);
        assert!((v - 0.1113).abs() < 1e-3, "{v}");
        let seq: Vec<f64> = (1..200)
            .map(|n| n_copy_lower_bound(&ApproxPrivateParams::new(0.0, c(0.2), 2, 0.97).with_copies(n)).unwrap())
            .collect();
        assert!(seq.windows(2).all(|w| w[1] >= w[0]));
        assert!(*seq.last().unwrap() > 0.99);
    }

    #[test]
    fn threshold_example() {
        let lambda = additivity_lambda(0.1, 3).unwrap();
        // (1.001)^{-1/3} = 0.99966689…, i.e. 0.999667 to six places
        assert!((lambda - 0.999667).abs() < 5e-7, "{lambda}");
        let p = ApproxPrivateParams::new(0.0, c(0.0), 2, lambda).with_kappa(0.1).with_n(3);
        let big_n = superactivation_n_threshold(&p).unwrap();
        assert_eq!(big_n, 354);
        let natural = ((8.0f64 / 9.0).ln() - 1f64.ln()) / lambda.ln();
        assert_eq!(natural.floor() as usize + 1, big_n);
        let at = |n| (1.0 - 0.1) * n_copy_lower_bound(&p.with_copies(n)).unwrap() - 0.1;
        assert!(at(big_n) > 0.0);
        assert!(at(big_n - 1) <= 0.0);
    }

    #[test]
    fn threshold_errors_and_limits() {
        let p = ApproxPrivateParams::new(0.0, c(1.0), 2, 0.9).with_kappa(0.1);
        assert!(matches!(superactivation_n_threshold(&p), Err(Error::InfeasibleParams(_))));
        let p = ApproxPrivateParams::new(0.25, c(0.0), 2, 0.9).with_kappa(0.1);
        assert!(matches!(superactivation_n_threshold(&p), Err(Error::InfeasibleParams(_))));
        let p = ApproxPrivateParams::new(0.0, c(0.0), 2, 0.9);
        assert!(matches!(superactivation_n_threshold(&p), Err(Error::InfeasibleParams(_))));
        // slack above h((1+|c|)/2) means one copy already suffices
        let p = ApproxPrivateParams::new(0.0, c(0.9), 2, 0.9).with_kappa(1e-4);
        assert_eq!(superactivation_n_threshold(&p).unwrap(), 1);
    }

    #[test]
    fn threshold_grows_with_lambda() {
        let n_at = |lambda| {
            let p = ApproxPrivateParams::new(0.0, c(0.0), 2, lambda).with_kappa(0.1);
            superactivation_n_threshold(&p).unwrap()
        };
        let mut last = 0;
        for lambda in [0.9, 0.95, 0.99, 0.999, 0.9999] {
            let n = n_at(lambda);
            assert!(n > last, "lambda={lambda}");
            last = n;
        }
        let grid: Vec<usize> = (1..100).map(|k| n_at(k as f64 / 100.0)).collect();
        assert!(grid.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn additivity_lambda_examples() {
        for kappa in [0.05, 0.1, 0.3, 0.9] {
            assert!((additivity_lambda(kappa, 1).unwrap() - 1.0 / (1.0 + kappa)).abs() < 1e-15);
            for n in 1..8 {
                let l = additivity_lambda(kappa, n).unwrap();
                assert!(l >= 0.5 && l < 1.0);
                assert!(l > 2f64.powf(-1.0 / n as f64));
            }
        }
        assert!(additivity_lambda(0.0, 2).is_err());
        assert!(additivity_lambda(0.5, 0).is_err());
    }

    #[test]
    fn flag_margins() {
        for kappa in [0.05, 0.1, 0.3] {
            for n in 2..=6 {
                let lambda = additivity_lambda(kappa, n).unwrap();
                for ell in 1..n {
                    assert!(flag_additivity_margin(kappa, lambda, n, ell).unwrap() <= 0.0);
                }
            }
        }
        assert!((flag_additivity_margin(0.3, 1.0, 4, 2).unwrap() + 0.09).abs() < 1e-15);
        assert_eq!(flag_additivity_margin(0.3, 0.0, 4, 2).unwrap(), 1.0);
        assert!(flag_additivity_margin(0.3, 0.9, 4, 0).is_err());
        assert!(flag_additivity_margin(0.3, 0.9, 4, 4).is_err());
    }

    #[test]
    fn plan_examples() {
        let plan = superactivation_plan(0.0, 3, c(0.0)).unwrap();
        assert!((plan.kappa - 0.4999).abs() < 1e-12);
        assert!((plan.lambda - (1.0 + plan.kappa.powi(3)).powf(-1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(plan.additivity_margins.len(), 2);
        assert!(plan.activation_value > 0.0);
        let p = ApproxPrivateParams::new(0.0, c(0.0), 2, plan.lambda)
            .with_kappa(plan.kappa)
            .with_n(3);
        assert_eq!(plan.big_n, superactivation_n_threshold(&p).unwrap());
        assert!(matches!(
            superactivation_plan(0.25, 2, c(0.0)),
            Err(Error::InfeasibleParams(_))
        ));
        assert!(superactivation_plan(0.0, 1, c(0.0)).unwrap().additivity_margins.is_empty());
        let small = superactivation_plan(0.01, 2, c(0.3)).unwrap();
        assert!(superactivation_slack(0.01, small.kappa) > 0.0);
        assert!(superactivation_slack(0.01, small.kappa + KAPPA_GRID_STEP) <= 0.0);
    }

    proptest! {
        #[test]
        fn n_copy_monotone(eps in 0.0f64..0.5, cabs in 0.0f64..1.0, lambda in 0.0f64..1.0, n in 1usize..50) {
            let p = ApproxPrivateParams::new(eps, c(cabs), 2, lambda).with_copies(n);
            let a = n_copy_lower_bound(&p).unwrap();
            let b = n_copy_lower_bound(&p.with_copies(n + 1)).unwrap();
            prop_assert!(b >= a - 1e-15);
            let worse = ApproxPrivateParams { epsilon: (eps + 0.01).min(0.5), ..p };
            prop_assert!(n_copy_lower_bound(&worse).unwrap() <= a + 1e-15);
        }

        #[test]
        fn threshold_is_tight(eps in 0.0f64..0.05, kappa in 0.01f64..0.3, cabs in 0.0f64..0.9, lambda in 0.5f64..0.999) {
            let p = ApproxPrivateParams::new(eps, c(cabs), 2, lambda).with_kappa(kappa);
            prop_assume!(superactivation_slack(eps, kappa) > 1e-6);
            let n = superactivation_n_threshold(&p).unwrap();
            let at = |m| (1.0 - kappa) * n_copy_lower_bound(&p.with_copies(m)).unwrap() - kappa;
            prop_assert!(at(n) > 0.0);
            if n >= 2 {
                prop_assert!(at(n - 1) <= 1e-12);
            }
        }

        #[test]
        fn separation_positive_iff_delta_positive(eps in 0.0f64..0.5, cabs in 0.0f64..1.0, lambda in 0.5f64..1.0, d in 2usize..6) {
            let p = ApproxPrivateParams::new(eps, c(cabs), d, lambda);
            let delta = approx_private_lower_bound(&p).unwrap();
            let s = separation_lower_bound(&p).unwrap();
            prop_assert_eq!(delta > 0.0, s > 0.0);
            prop_assert!(s <= 0.5);
        }
    }
}
