//! Computational workbench for the rank-3 geometries that `G2(q)` induces on
//! the symplectic space `W(5,q)`, `q` a power of two.
//!
//! The crate builds the split Cayley hexagon inside `Q(6,q)`, projects it to
//! `W(5,q)`, classifies lines and planes, constructs the four geometries
//! `Γ0`..`Γ3`, computes fundamental groups of their flag complexes by coset
//! enumeration, and checks the fused-amalgam description of `G2(2)`.

pub mod acceptance;
pub mod amalgam;
pub mod covers;
pub mod error;
pub mod finfield;
pub mod fpgroup;
pub mod hexagon;
pub mod incidence;
pub mod permgroup;
pub mod projspace;
pub mod report;
pub mod workbench;

pub use error::{Error, Result};
