//! Dense complex linear algebra: vectors, matrices, Kronecker products and a
//! Hermitian Jacobi eigensolver.

mod eigen;
mod matrix;
mod vector;

pub use eigen::{hermitian_eig, hermitian_eig_with, trace_norm_hermitian, EigenDecomposition, JacobiOptions};
pub use matrix::ComplexMatrix;
pub use vector::ComplexVector;
