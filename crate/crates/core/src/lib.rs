//! Numerical checks for the entanglement cost of the Tiles bound entangled
//! state `ρ_b = P_b/4`.
//!
//! * [`tiles`] builds the unextendible product basis, `P_b`, `ρ_b`, the
//!   singlet and a product-state certificate that `𝟙 + P_b` is separable.
//! * [`product_opt`] estimates `α₁ = max ⟨e,f|P_b|e,f⟩ < 1` by see-saw with
//!   seeded restarts, cross-checked by a deterministic grid search.
//! * [`cost_bound`] turns `α̂₁` into the per-copy lower bound
//!   `E_C ≥ −log₂((1+α̂₁)/2)` and verifies the induction-step operator
//!   inequality on 81- and 729-dimensional spaces.
//! * [`negativity`] computes logarithmic negativity and checks that
//!   `ρ_b^{⊗N} ⊗ Ψ^{⊗L}` has `E_N = L`, so at most `L` singlets come out.
//! * [`report`] drives everything and emits JSON reports for the CLI.

pub mod config;
pub mod cost_bound;
pub mod error;
pub mod linalg;
pub mod negativity;
pub mod product_opt;
pub mod report;
pub mod tensor;
pub mod tiles;

pub use config::ToleranceConfig;
pub use error::{Error, Result};
