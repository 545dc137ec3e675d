//! Dense complex linear algebra.
//!
//! Matrices are stored row-major. Superoperators on `M_d` act on the
//! row-major vectorization `vec(x)[j*d + k] = x[(j, k)]`.

mod eigen;
mod matrix;
mod subspace;

pub use eigen::{eig_hermitian, eig_hermitian_with, matrix_power, EigenDecomposition, PositiveMatrix};
pub use matrix::CMatrix;
pub use subspace::{
    inner, nullspace, orthogonal_complement, orthonormal_basis, projection_residual,
    subspace_equal, subspace_equal_vectors, subspace_intersection, vec_norm,
};
