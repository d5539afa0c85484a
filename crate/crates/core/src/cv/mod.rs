//! Truncated bosonic modes: analytic displacement matrices, coherent states,
//! the Weyl function and its differential entropy, and the quadrature form of
//! the two-mode SWAP.

mod fock;
mod swap;
mod weyl;

pub use fock::{
    coherent_state, displacement_element, displacement_matrix_cv, gaussian_ops, rotation,
    squeezing, ComplexPoint, FockMode, GaussianOp, Truncated,
};
pub use swap::{
    coherent_matrix_element, coherent_overlap, cv_swap_quadrature, cv_swap_quadrature_with,
    swap_block_error, swap_convergence, two_mode_swap, SwapConvergence, CV_SWAP_DIM_LIMIT,
};
pub use weyl::{
    weyl_distribution, weyl_entropy, weyl_entropy_with, weyl_function, QuadratureGrid, WeylEntropy,
    ENTROPY_POINT_LIMIT,
};
