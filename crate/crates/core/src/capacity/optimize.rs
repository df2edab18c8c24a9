use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::capacity::coherent::coherent_info_factor;
use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, C64};
use crate::states::DensityOperator;

/// Default cap on the channel input dimension accepted by [`q1_optimize`].
pub const OPTIMIZER_DIMENSION_CAP: usize = 16;

/// Settings for the seeded multi-start search behind [`q1_optimize`].
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// A restart stops once an accepted step improves the objective by less
    /// than this amount.
    pub step_tolerance: f64,
    pub dimension_cap: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 400,
            seed: 0,
            step_tolerance: 1e-13,
            dimension_cap: OPTIMIZER_DIMENSION_CAP,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 || self.dimension_cap == 0 {
            return Err(Error::Domain(
                "restarts, max_iterations and dimension_cap must be positive".into(),
            ));
        }
        if !(self.step_tolerance > 0.0) {
            return Err(Error::Domain("step_tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of [`q1_optimize`]: the best value, the state attaining it, and
/// the final value of every restart in restart order.
#[derive(Clone, Debug)]
pub struct OptimizeResult {
    pub value: f64,
    pub state: DensityOperator,
    pub restart_values: Vec<f64>,
}

/// Local maximization of `I_c(ρ, N)` over `ρ = G G† / tr(G G†)`.
///
/// Each restart draws `G` from its own ChaCha stream `(seed, index)` and
/// runs BFGS with central-difference gradients, so the result does not
/// depend on thread scheduling. The value is a lower bound on `Q^(1)`; no
/// global optimality is claimed.
pub fn q1_optimize(ch: &Channel, cfg: &OptimizerConfig) -> Result<OptimizeResult> {
    cfg.validate()?;
    let n = ch.in_dim();
    if n > cfg.dimension_cap {
        return Err(Error::DimensionCap {
            requested: n,
            cap: cfg.dimension_cap,
        });
    }
    let runs = (0..cfg.restarts)
        .into_par_iter()
        .map(|idx| run_restart(ch, cfg, idx as u64))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, (v, _)) in runs.iter().enumerate() {
        if *v > runs[best].0 {
            best = i;
        }
    }
    let g = to_factor(&runs[best].1, n);
    let state = DensityOperator::new_unchecked(g.mul_adjoint(&g).hermitian_part(), ch.in_dims().clone());
    Ok(OptimizeResult {
        value: runs[best].0,
        state,
        restart_values: runs.iter().map(|(v, _)| *v).collect(),
    })
}

/// Unit-Frobenius-norm `n × n` factor from `2n²` real parameters.
fn to_factor(x: &[f64], n: usize) -> ComplexMatrix {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let data = x.chunks(2).map(|c| C64::new(c[0] / norm, c[1] / norm)).collect();
    ComplexMatrix::from_vec_unchecked(n, n, data)
}

fn run_restart(ch: &Channel, cfg: &OptimizerConfig, idx: u64) -> Result<(f64, Vec<f64>)> {
    let n = ch.in_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(idx);
    let mut x: Vec<f64> = (0..2 * n * n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
    let objective = |x: &[f64]| -> Result<f64> { Ok(-coherent_info_factor(ch, &to_factor(x, n))?) };
    let (fx, x) = bfgs(objective, x, cfg.max_iterations, cfg.step_tolerance)?;
    Ok((-fx, x))
}

const FD_STEP: f64 = 1e-6;

fn gradient(f: &impl Fn(&[f64]) -> Result<f64>, x: &[f64]) -> Result<Vec<f64>> {
    let mut probe = x.to_vec();
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() {
        let xi = x[i];
        probe[i] = xi + FD_STEP;
        let up = f(&probe)?;
        probe[i] = xi - FD_STEP;
        let down = f(&probe)?;
        probe[i] = xi;
        g[i] = (up - down) / (2.0 * FD_STEP);
    }
    Ok(g)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `f` with BFGS and Armijo backtracking. Returns the final value
/// and point.
fn bfgs(
    f: impl Fn(&[f64]) -> Result<f64>,
    mut x: Vec<f64>,
    max_iterations: usize,
    tol: f64,
) -> Result<(f64, Vec<f64>)> {
    let m = x.len();
    let identity = |h: &mut Vec<f64>| {
        h.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..m {
            h[i * m + i] = 1.0;
        }
    };
    let mut h = vec![0.0; m * m];
    identity(&mut h);
    let mut fx = f(&x)?;
    let mut g = gradient(&f, &x)?;
    for _ in 0..max_iterations {
        let mut p: Vec<f64> = (0..m).map(|i| -dot(&h[i * m..(i + 1) * m], &g)).collect();
        let mut slope = dot(&g, &p);
        if !(slope < 0.0) {
            identity(&mut h);
            p = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
            if slope == 0.0 {
                break;
            }
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..50 {
            let trial: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + alpha * b).collect();
            let ft = f(&trial)?;
            if ft <= fx + 1e-4 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            break;
        };
        let g_new = gradient(&f, &x_new)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let improvement = fx - f_new;
        x = x_new;
        fx = f_new;
        g = g_new;
        if improvement < tol {
            break;
        }
        let sy = dot(&s, &y);
        if sy > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..m).map(|i| dot(&h[i * m..(i + 1) * m], &y)).collect();
            let yhy = dot(&y, &hy);
            let c = rho * rho * yhy + rho;
            for i in 0..m {
                for j in 0..m {
                    h[i * m + j] += c * s[i] * s[j] - rho * (s[i] * hy[j] + hy[i] * s[j]);
                }
            }
        }
    }
    Ok((fx, x))
}
