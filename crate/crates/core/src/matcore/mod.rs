//! Dense complex linear algebra and entropy primitives.

pub mod dims;
pub mod eigen;
pub mod entropy;
pub mod matrix;

pub use dims::{
    partial_trace, partial_transpose, permute_subsystems, permute_vector, permuted_dims,
    reduce_to, swap_operator, SubsystemDims,
};
pub use eigen::{
    eig_hermitian, eigvals_hermitian, hermitian_function, is_unitary, matrix_abs,
    min_eigenvalue, operator_norm, singular_values, trace_norm,
};
pub use entropy::{
    binary_entropy, eta, matrix_entropy, purify, shannon_entropy, spectrum_entropy,
    von_neumann_entropy,
};
pub use matrix::{ComplexMatrix, C64};
