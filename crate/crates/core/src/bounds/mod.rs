//! Closed-form capacity bounds and verifiers for explicit SDP witnesses.

mod closed;
mod witness;

pub use closed::{
    depolarizing_breakpoint, depolarizing_upper, depolarizing_upper_formula,
    diamond_upper_via_choi, erasure_capacity, privacy_quantum_tradeoff,
    transposition_bound_closed, transposition_bound_general, transposition_coefficients,
};
pub use witness::{
    beta_witness_private, choi_output_transpose, transposition_witness_for_shields,
    transposition_witness_private, verify_beta_witness, verify_transposition_witness,
    BetaWitness, TranspositionWitness, WitnessVerdict, WITNESS_TOLERANCE,
};
