//! Classical Lie-theoretic data.

mod adjoint;
mod datum;
mod peter_weyl;
mod weyl;

pub use adjoint::{proportionality, BasisLabel, ClassicalAdjoint, GammaGroup};
pub use datum::{CartanType, RootDatum, Weight};
pub use peter_weyl::{GammaIrrep, PeterWeyl};
pub use weyl::Labels;

/// `Σ (dim W)^2` over irreducibles of `G ⋊ Γ` in `⊕_{d' ≤ d} V^{⊗d'}`.
pub fn peter_weyl_dim(datum: &RootDatum, adj: &ClassicalAdjoint, use_gamma: bool, d: usize) -> crate::Result<u64> {
    PeterWeyl::new(datum, adj, use_gamma).dim(d)
}
