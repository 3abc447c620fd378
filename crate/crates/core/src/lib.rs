//! Exact arithmetic for the nilpotent quotients `G_{n,c} = Z_{m^c} ⋊ Z^r` of the
//! generalized solvable Baumslag-Solitar groups `Γ_n`.
//!
//! The crate is organised bottom-up:
//!
//! - [`intlin`]: exact integer linear algebra (determinants, Smith normal form,
//!   cokernels, integral solves).
//! - [`group`]: group parameters and the normal-form arithmetic `S^y x^θ`.
//! - [`autos`]: automorphisms given by generator images, the congruence
//!   criterion for extendable matrices, composition and inversion.
//! - [`twisted`]: Reidemeister numbers, exact and by brute-force oracle.
//! - [`witness`]: the explicit `M = m^k N + Id` witness family and the degree
//!   analysis built on it.
//! - [`corpus`]: the regression corpus format shared by the CLI and tests.

pub mod autos;
pub mod corpus;
mod error;
pub mod group;
pub mod intlin;
pub mod json;
pub mod modular;
pub mod twisted;
mod union_find;
pub mod witness;

pub use autos::{Automorphism, ValidationFailure, ValidationReport};
pub use error::{Error, Result};
pub use group::{GroupElement, GroupParams, Limits, PrimePower, TorsionInfo};
pub use intlin::{Cokernel, IntMatrix, SnfDecomposition};
pub use twisted::{OracleRecord, ReidemeisterNumber, ReidemeisterReport, TwistedNode};
pub use witness::{DegreeReport, WitnessCertificate, WitnessMatrix};
