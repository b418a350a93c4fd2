//! Sparse exact linear algebra.

mod commutant;
mod decompose;
pub mod echelon;
mod mat;

pub use commutant::{Affine, Support};
pub use decompose::Decomposer;
pub use echelon::Echelon;
pub use mat::{axpy, linear_combination, sparse_from_pairs, Mat, SparseVec};
