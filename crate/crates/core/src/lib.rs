#![forbid(unsafe_code)]

//! Exact harmonic analysis on locally compact groups with a compact normal
//! subgroup, at desk scale.
//!
//! The two supported group models — finite groups given by Cayley tables and
//! Z×F with F finite — make every integral an exact finite sum, so the
//! classical identities (the Weil disintegration of Haar measure, Schur
//! orthogonality at the subgroup and the induced level, norm bounds and
//! injectivity of the Fourier-Stieltjes transform, Peter-Weyl inversion) can
//! be verified numerically to stated tolerances instead of assumed.
//!
//! Module map:
//! - [`group`]: group models, compact normal subgroups, coset spaces, Haar
//!   data, and the two evaluation orders of the Haar integral.
//! - [`rep`]: unitary representations of the subgroup, characters,
//!   irreducibility/equivalence tests, dual objects, and subgroup-level
//!   Schur integrals.
//! - [`induced`]: the induction functor, its canonical coset basis, operator
//!   matrices, matrix coefficients and their supports.
//! - [`schur`]: induced-level Schur integrals, the structure constants of
//!   the orthogonality relation, and the normalized-basis audit.
//! - [`transform`]: matrix-algebra-valued measures and densities, the
//!   Fourier-Stieltjes and Fourier transforms, family norms, L_p norms, and
//!   the injectivity rank certificate.
//! - [`inversion`]: coefficient decomposition, the inversion series, and a
//!   Gram-corrected least-squares reconstruction.
//! - [`jsonio`]: wire formats shared by the library and the CLI.
//! - [`suite`]: the catalog of builtin (G, K) pairs used for verification.

pub mod error;
pub mod group;
pub mod induced;
pub mod inversion;
pub mod jsonio;
pub mod linalg;
pub mod rep;
pub mod schur;
pub mod suite;
pub mod transform;

pub use error::{Error, Result};

/// Default tolerances: structural checks (unitarity, homomorphism defects)
/// and yes/no decision thresholds (irreducibility, equivalence).
pub mod tol {
    pub const STRUCTURAL: f64 = 1e-10;
    pub const DECISION: f64 = 1e-8;
}

/// The measure normalization used throughout, embedded in reports so that
/// every number is self-describing.
pub const MEASURE_CONVENTION: &str =
    "nu(K)=1; mu(coset)=1; lambda=mu(x)nu with point mass 1/|K|";
