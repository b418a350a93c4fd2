//! Quantum-group data over ℚ(q) for small simple types, and certification of
//! FRT-type presentations of the quantized function algebra on the adjoint group.

pub mod braiding;
pub mod error;
pub mod field;
pub mod hwmodule;
pub mod intertwiners;
pub mod linalg;
pub mod presentation;
pub mod roots;
pub mod scalar;
pub mod tensor;
pub mod uqmod;

pub use error::{Error, Result};
pub use field::Field;
pub use scalar::{LaurentPoly, Rational, Scalar};
