//! Amplification margins, parameter sweeps and the approximate
//! private-channel bounds behind superactivation.

mod approx;
mod margins;

pub use approx::{
    additivity_lambda, approx_private_lower_bound, continuity_g, continuity_g_inverse,
    flag_additivity_margin, n_copy_lower_bound, separation_lower_bound, superactivation_n_threshold,
    superactivation_plan, superactivation_slack, ApproxPrivateParams, SuperactivationPlan,
    KAPPA_GRID_STEP,
};
pub use margins::{
    depol_margin, depol_margin_with_case, erasure_margin, has_amplification,
    min_amplification_dimension, sweep, Axis, CaseFilter, MarginKind, SweepGrid, SweepRow,
    BREAKPOINT_OFFSET,
};
