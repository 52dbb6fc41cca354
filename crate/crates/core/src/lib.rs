//! Internal quantum reference frames for compact symmetry groups.
//!
//! The crate builds the invariant ("physical") subspace of a bipartite system
//! `R ⊗ S` carrying a tensor-product representation `U_g ⊗ V_g`, extracts the
//! conditional state of `S` relative to a coherent-state system on `R`, and
//! evaluates conditional uniformity/asymmetry by several independent routes:
//!
//! * direct Haar integration of `|⟨φ|V_g|φ⟩|²`,
//! * the purity `tr ρ_S²` of the reduced state of the invariant state,
//! * the multiplicity formula for the average over the invariant subspace,
//! * Monte Carlo averages over Haar-random invariant states.
//!
//! Three groups are supported: finite groups given by a multiplication table
//! (with `S3` built in), the circle group `U(1)` and `SU(2)`.

pub mod asymmetry;
pub mod coherent;
pub mod error;
pub mod group;
pub mod linalg;
pub mod representation;
pub mod sampling;
pub mod scenario;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
