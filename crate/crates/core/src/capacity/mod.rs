//! Coherent information, Holevo and private information, ansatz lower
//! bounds and the one-shot capacity optimizer.

mod coherent;
mod holevo;
mod optimize;

pub use coherent::{
    ansatz_state, ansatz_value, coherent_info, coherent_info_direct, coherent_info_state,
    multi_copy_ansatz_value, multi_copy_ansatz_value_capped, q1_ansatz_value, Ansatz,
    SINGLE_EVALUATION_CAP,
};
pub use holevo::{
    amplification_lower_bound, depolarizing_holevo, erasure_holevo, holevo, j_sym_asym,
    private_info, Ensemble,
};
pub use optimize::{q1_optimize, OptimizeResult, OptimizerConfig, OPTIMIZER_DIMENSION_CAP};
