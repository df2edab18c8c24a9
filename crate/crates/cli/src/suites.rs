use capamp_core::bounds::{
    beta_witness_private, privacy_quantum_tradeoff, transposition_bound_closed,
    transposition_bound_general, verify_beta_witness,
};
use capamp_core::capacity::{
    ansatz_state, ansatz_value, coherent_info_direct, coherent_info_state, depolarizing_holevo,
    erasure_holevo, holevo, j_sym_asym, multi_copy_ansatz_value_capped, private_info,
    q1_ansatz_value, q1_optimize, Ansatz, Ensemble, OptimizerConfig, OPTIMIZER_DIMENSION_CAP,
    SINGLE_EVALUATION_CAP,
};
use capamp_core::channels::{depolarizing_channel, erasure_channel, private_channel, tensor};
use capamp_core::matcore::binary_entropy;
use capamp_core::random::random_density;
use capamp_core::states::{
    d_asym, d_sym, gamma_qd, ppt_min_eigenvalue, sym_asym_projectors, zeta_state_capped,
    ZetaLayout, DEFAULT_DIMENSION_CAP,
};
use capamp_core::thresholds::{
    additivity_lambda, approx_private_lower_bound, continuity_g, continuity_g_inverse,
    erasure_margin, flag_additivity_margin, min_amplification_dimension, n_copy_lower_bound,
    separation_lower_bound, superactivation_n_threshold, sweep, ApproxPrivateParams, CaseFilter,
    MarginKind,
};
use capamp_core::{ComplexMatrix, DensityOperator, Result, SubsystemDims, C64};
use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemmas,
    Amplification,
    Gap,
    Superactivation,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Amplification => "amplification",
            Suite::Gap => "gap",
            Suite::Superactivation => "superactivation",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|actual − expected| ≤ tolerance`
    Eq,
    /// `actual ≤ expected + tolerance`
    Le,
    /// `actual ≥ expected − tolerance`
    Ge,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

/// Settings shared by all suites.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
    pub dimension_cap: Option<usize>,
}

impl Settings {
    fn cap(&self, default: usize) -> usize {
        self.dimension_cap.unwrap_or(default)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, id: String, relation: Relation, expected: f64, actual: f64, tolerance: f64) {
        let pass = match relation {
            Relation::Eq => (actual - expected).abs() <= tolerance,
            Relation::Le => actual <= expected + tolerance,
            Relation::Ge => actual >= expected - tolerance,
        };
        self.0.push(Check {
            id,
            expected,
            actual,
            tolerance,
            relation,
            pass,
        });
    }

    fn eq(&mut self, id: impl Into<String>, expected: f64, actual: f64, tolerance: f64) {
        self.push(id.into(), Relation::Eq, expected, actual, tolerance);
    }

    fn le(&mut self, id: impl Into<String>, bound: f64, actual: f64, tolerance: f64) {
        self.push(id.into(), Relation::Le, bound, actual, tolerance);
    }

    fn ge(&mut self, id: impl Into<String>, bound: f64, actual: f64, tolerance: f64) {
        self.push(id.into(), Relation::Ge, bound, actual, tolerance);
    }

    fn flag(&mut self, id: impl Into<String>, holds: bool) {
        self.push(id.into(), Relation::Eq, 1.0, if holds { 1.0 } else { 0.0 }, 0.0);
    }
}

fn h(x: f64) -> f64 {
    binary_entropy(x).unwrap_or(f64::NAN)
}

fn special_q(d: usize) -> f64 {
    (d + 1) as f64 / (2 * d) as f64
}

/// Runs the checks of one suite (all suites for [`Suite::All`]).
pub fn run(suite: Suite, s: &Settings) -> Result<Vec<Check>> {
    let mut c = Checks::default();
    if matches!(suite, Suite::Lemmas | Suite::All) {
        lemmas(&mut c, s)?;
    }
    if matches!(suite, Suite::Amplification | Suite::All) {
        amplification(&mut c, s)?;
    }
    if matches!(suite, Suite::Gap | Suite::All) {
        gap(&mut c, s)?;
    }
    if matches!(suite, Suite::Superactivation | Suite::All) {
        superactivation(&mut c, s)?;
    }
    Ok(c.0)
}

fn lemmas(c: &mut Checks, s: &Settings) -> Result<()> {
    for q in [0.3, 0.5, 0.75] {
        for d in [2, 3] {
            let g = gamma_qd(q, d)?;
            c.eq(
                format!("pbit.key_and_shield.q{q}.d{d}"),
                1.0,
                coherent_info_state(&g, &[0], &[1, 2, 3])?,
                s.tol,
            );
            c.eq(
                format!("pbit.key_only.q{q}.d{d}"),
                1.0 - h(q),
                coherent_info_state(&g, &[0], &[1])?,
                s.tol,
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    for q in [0.3, 0.5, 0.75] {
        for d in [2, 3] {
            let ch = private_channel(q, d)?;
            let gamma = gamma_qd(q, d)?.permute(&[0, 2, 1, 3])?;
            c.le(format!("choi.matches_pbit.q{q}.d{d}"), 0.0, ch.choi().trace_distance(&gamma)?, 1e-10);
            let mut worst: f64 = 0.0;
            for _ in 0..20 {
                let rho = random_density(&mut rng, 2 * d, 2 * d);
                let a = ch.apply_matrix(rho.matrix())?;
                let b = ch.apply_via_choi(rho.matrix())?;
                worst = worst.max(a.max_abs_diff(&b));
            }
            c.le(format!("choi.action.q{q}.d{d}"), 0.0, worst, 1e-9);
        }
    }
    let cap = s.cap(OPTIMIZER_DIMENSION_CAP);
    for d in [2, 3] {
        let target = 1.0 / d as f64;
        let ch = private_channel(special_q(d), d)?;
        c.eq(format!("single_letter.ansatz.d{d}"), target, q1_ansatz_value(&ch)?, s.tol);
        let cfg = OptimizerConfig {
            restarts: 100,
            seed: s.seed,
            dimension_cap: cap,
            ..OptimizerConfig::default()
        };
        let r = q1_optimize(&ch, &cfg)?;
        c.le(format!("single_letter.optimizer_max.d{d}"), target, r.value, 1e-6);
        c.ge(format!("single_letter.optimizer_reaches.d{d}"), target, r.value, 1e-6);
    }
    let cap = s.cap(SINGLE_EVALUATION_CAP);
    for d in [2, 3] {
        c.eq(
            format!("multi_copy.n2.d{d}"),
            2.0 / d as f64,
            multi_copy_ansatz_value_capped(2, d, cap)?,
            s.tol,
        );
    }
    const GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
    for d in [2, 3] {
        for lambda in GRID {
            let (js, ja) = j_sym_asym(&erasure_channel(lambda, d)?, d)?;
            for q in GRID {
                let chi = holevo(&Ensemble::new(vec![q, 1.0 - q], vec![js.clone(), ja.clone()])?)?;
                c.eq(
                    format!("holevo.erasure.d{d}.lambda{lambda}.q{q}"),
                    erasure_holevo(q, lambda)?,
                    chi,
                    s.tol,
                );
            }
        }
    }
    for d in [2, 3, 5] {
        for p in GRID {
            let (js, ja) = j_sym_asym(&depolarizing_channel(p, d)?, d)?;
            for q in GRID {
                let chi = holevo(&Ensemble::new(vec![q, 1.0 - q], vec![js.clone(), ja.clone()])?)?;
                c.eq(
                    format!("holevo.depolarizing.d{d}.p{p}.q{q}"),
                    depolarizing_holevo(q, p, d)?,
                    chi,
                    s.tol,
                );
            }
        }
    }
    Ok(())
}

fn sym_pair(d: usize) -> Result<(DensityOperator, DensityOperator)> {
    let (ps, pa, _) = sym_asym_projectors(d)?;
    let dims = SubsystemDims::new(vec![d, d])?;
    Ok((
        DensityOperator::new(ps.scale(1.0 / d_sym(d) as f64), dims.clone())?,
        DensityOperator::new(pa.scale(1.0 / d_asym(d) as f64), dims)?,
    ))
}

fn amplification(c: &mut Checks, s: &Settings) -> Result<()> {
    for d in 2..=5 {
        let (s1, s2) = sym_pair(d)?;
        for q in [0.0, 0.25, 0.5, 0.75, 1.0] {
            c.eq(
                format!("transposition.general_vs_closed.q{q}.d{d}"),
                transposition_bound_closed(q, d)?,
                transposition_bound_general(q, &s1, &s2, d)?,
                1e-10,
            );
        }
        c.eq(
            format!("transposition.special.d{d}"),
            (1.0 + 1.0 / d as f64).log2(),
            transposition_bound_closed(special_q(d), d)?,
            s.tol,
        );
    }
    let grid = sweep(MarginKind::Erasure, 2, 200)?;
    c.flag("sweep.erasure.d2.has_negative", grid.has_negative(CaseFilter::Any));
    c.eq("margin.erasure.d2.lambda0.5.q0.75", -0.0094, erasure_margin(0.75, 2, 0.5)?, 5e-5);
    c.eq("margin.erasure.d3.lambda0.5.q0.667", -0.1258, erasure_margin(2.0 / 3.0, 3, 0.5)?, 5e-5);
    let dim = |kind, filter| -> Result<f64> {
        Ok(min_amplification_dimension(kind, filter, 20, 200)?.map_or(f64::NAN, |d| d as f64))
    };
    c.eq("min_dimension.erasure", 2.0, dim(MarginKind::Erasure, CaseFilter::Any)?, 0.0);
    c.eq("min_dimension.depolarizing.case2", 5.0, dim(MarginKind::Depolarizing, CaseFilter::Case2)?, 0.0);
    c.eq("min_dimension.depolarizing.case1", 11.0, dim(MarginKind::Depolarizing, CaseFilter::Case1)?, 0.0);
    Ok(())
}

fn gap(c: &mut Checks, s: &Settings) -> Result<()> {
    for d in 2..=4 {
        let ch = private_channel(special_q(d), d)?;
        let v = verify_beta_witness(&ch, &beta_witness_private(d)?)?;
        c.flag(format!("beta_witness.feasible.d{d}"), v.feasible);
        c.eq(format!("beta_witness.trace.d{d}"), 2.0, v.value, s.tol);
        let dims = SubsystemDims::new(vec![2, d])?;
        let mixed = ComplexMatrix::identity(d).scale(1.0 / d as f64);
        let states = (0..2)
            .map(|k| DensityOperator::new(ComplexMatrix::unit(2, 2, k, k).kron(&mixed), dims.clone()))
            .collect::<Result<Vec<_>>>()?;
        let ens = Ensemble::new(vec![0.5, 0.5], states)?;
        c.eq(format!("private_info.d{d}"), 1.0, private_info(&ens, &ch)?, s.tol);
    }
    for n in 2..=4usize {
        let nf = n as f64;
        let d = n * n;
        let q_value = nf / d as f64;
        c.eq(format!("gap.quantum.n{n}"), 1.0 / nf, q_value, s.tol);
        let p_value = nf * 2f64.log2();
        c.eq(format!("gap.private.n{n}"), nf, p_value, s.tol);
        let log_da = nf * ((2 * d) as f64).log2();
        c.eq(format!("gap.log_input_dimension.n{n}"), nf + 2.0 * nf * nf.log2(), log_da, s.tol);
        c.ge(
            format!("gap.tradeoff.n{n}"),
            p_value,
            privacy_quantum_tradeoff(2f64.powf(log_da), q_value)?,
            0.0,
        );
    }
    Ok(())
}

fn superactivation(c: &mut Checks, s: &Settings) -> Result<()> {
    let cap = s.cap(DEFAULT_DIMENSION_CAP);
    let layout = ZetaLayout { d: 2, r: 1, m: 1, n: 1 };
    let z = zeta_state_capped(1.0 / 3.0, 2, 1, 1, 1, cap)?;
    c.eq("zeta.trace", 1.0, z.matrix().trace().re, 1e-12);
    c.ge("zeta.ppt.q1/3", 0.0, ppt_min_eigenvalue(&z, &layout.bob_subsystems())?, 1e-10);
    let z4 = zeta_state_capped(0.4, 2, 1, 1, 1, cap)?;
    c.le("zeta.npt.q0.4", -1e-6, ppt_min_eigenvalue(&z4, &layout.bob_subsystems())?, 0.0);

    let (q, lambda) = (0.75, 0.9);
    let ch = tensor(&private_channel(q, 2)?, &erasure_channel(lambda, 2)?);
    let state = ansatz_state(Ansatz::KeyMixedShieldEntangled, ch.in_dims())?;
    let direct = coherent_info_direct(&ch, &state)?;
    let branches = ansatz_value(&ch, Ansatz::KeyMixedShieldEntangled)?;
    c.eq("approx_bound.routes_agree", direct, branches, s.tol);
    let bound = approx_private_lower_bound(&ApproxPrivateParams::new(
        0.0,
        C64::new(2.0 * q - 1.0, 0.0),
        2,
        lambda,
    ))?;
    c.eq("approx_bound.value", 0.26985, bound, 5e-6);
    c.ge("approx_bound.holds", bound, direct, s.tol);
    c.eq("approx_bound.tight", bound, direct, s.tol);

    for d in [2, 3, 5] {
        for y in [0.1, 0.3, 0.5] {
            let x = continuity_g_inverse(y, d);
            c.eq(format!("g_inverse.d{d}.y{y}"), y, continuity_g(x, d), s.tol);
        }
    }
    let mut separated = true;
    for eps in [0.0, 0.01, 0.05, 0.1, 0.2] {
        for cabs in [0.0, 0.25, 0.5, 0.75] {
            for lam in [0.5, 0.7, 0.9, 0.99] {
                let p = ApproxPrivateParams::new(eps, C64::new(cabs, 0.0), 2, lam);
                if approx_private_lower_bound(&p)? > 0.0 && separation_lower_bound(&p)? <= 0.0 {
                    separated = false;
                }
            }
        }
    }
    c.flag("separation.positive_when_delta_positive", separated);

    for kappa in [0.05, 0.1, 0.3] {
        for n in 2..=6 {
            let lam = additivity_lambda(kappa, n)?;
            let worst = (1..n)
                .map(|ell| flag_additivity_margin(kappa, lam, n, ell))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            c.le(format!("flag_margin.kappa{kappa}.n{n}"), 0.0, worst, 0.0);
        }
    }

    let (kappa, n) = (0.1, 3);
    let lam = additivity_lambda(kappa, n)?;
    c.eq("threshold.lambda", 0.999667, lam, 5e-7);
    let p = ApproxPrivateParams::new(0.0, C64::new(0.0, 0.0), 2, lam)
        .with_kappa(kappa)
        .with_n(n);
    let big_n = superactivation_n_threshold(&p)?;
    c.eq("threshold.copies", 354.0, big_n as f64, 0.0);
    let at = |m: usize| -> Result<f64> {
        Ok((1.0 - kappa) * n_copy_lower_bound(&p.with_copies(m))? - kappa)
    };
    c.flag("threshold.holds_at_n", at(big_n)? > 0.0);
    c.flag("threshold.fails_below_n", at(big_n - 1)? <= 0.0);
    Ok(())
}
