//! Finite-truncation laboratory for backward-shift invariant subspaces of
//! vector-valued Hardy spaces and their almost and nearly invariant
//! relatives.
//!
//! Functions in `H²(ℂᵐ)` are stored by their coordinates in the Wold frame
//! `{Bⁿ eⱼ ζₛ}` of a finite Blaschke product `B` vanishing at the origin,
//! truncated to `N` blocks. On these coordinates `T_B` and `T*_B` act as
//! block shifts, so the structure routines reduce to dense linear algebra:
//!
//! - [`structure::decompose_thm32`] writes `M` invariant under a finite-rank
//!   perturbation of `T*_B` as `G R ⊕ B K` with wandering vectors `G`.
//! - [`structure::forward_thm37`] handles the forward perturbation through `M^⊥`.
//! - [`structure::almost_decompose_thm310`] and [`structure::almost_defect`]
//!   cover subspaces with finite defect.
//! - [`structure::nearly_decompose_thm313`] and
//!   [`structure::nearly_defect_decompose`] cover nearly invariant subspaces.
//!
//! The [`lab`] module generates seeded scenarios, runs their checks and
//! keeps a JSON-lines ledger; the `hardy-lab` binary exposes it.

pub mod blaschke;
pub mod codec;
pub mod error;
pub mod hardy;
pub mod lab;
pub mod linalg;
pub mod linspace;
pub mod structure;
pub mod toeplitz;
