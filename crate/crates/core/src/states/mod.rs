//! Private states, pbits, the PPT approximation `ζ`, and key security
//! predicates.

mod ccq;
mod density;
mod pbit;
mod zeta;

pub use ccq::{is_perfect_pdit, is_secure, key_ccq, CcqState};
pub use density::DensityOperator;
pub use pbit::{
    bell, d_asym, d_sym, gamma_qd, key_overlap, max_entangled, pbit_from_spec, pbit_overlap,
    pbit_spec_for_gamma, sym_asym_basis, sym_asym_projectors, PbitSpec,
};
pub use zeta::{
    ppt_min_eigenvalue, zeta_state, zeta_state_capped, ZetaLayout, DEFAULT_DIMENSION_CAP,
};
