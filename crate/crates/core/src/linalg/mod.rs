//! Dense complex linear algebra kernel.

mod functions;
mod matrix;
mod poly;
mod spectrum;
mod subspace;

pub use functions::{
    exp_nilpotent, expm, expm_jordan_chevalley, hermite_eval, jordan_chevalley,
    jordan_chevalley_with, semisimple_part, spectral_projector,
};
pub use matrix::{c64, real, CMatrix};
pub use poly::{charpoly, coefficient_residual, eval_monic, monic_from_roots};
pub use spectrum::{
    clustered_spectrum, eigenvalues, min_separation, multiplicities_for_values,
    spectrum_with_partition, ClusteredSpectrum,
};
pub use subspace::{
    centralizer_basis, centralizer_basis_tol, column_matrix, commutator_operator,
    intersection_dimension, normalized_rank, nullspace, numerical_rank, numerical_rank_vectors,
    DEFAULT_RANK_TOL,
};
