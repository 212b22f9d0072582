//! Finite covers of marked surfaces and integer matrix representations.
//!
//! The pieces:
//!
//! * [`Perm`] — permutations with canonical cycle notation I/O
//!   ([`perm`]),
//! * [`PermGroup`] — finite permutation groups given by generators, with a
//!   lazily computed, capped element closure ([`group`]),
//! * surface-group presentations, homomorphisms to a permutation group,
//!   exhaustive enumeration, boundary monodromy, conjugation
//!   classification, and the covering-genus computation ([`surface`]),
//! * integer matrix representations of surface groups, an explicit
//!   two-generator non-commuting family, and the power-word commutator
//!   probe ([`matrep`]).

pub mod group;
pub mod matrep;
pub mod perm;
pub mod surface;

pub use group::PermGroup;
pub use matrep::{explicit_nondensity_rep, vs_test, IntMatrix, IntMatrixRep, VsWitness};
pub use perm::Perm;
pub use surface::{
    boundary_image, enumerate_surface_homs, gamma_index_report, kodaira_parshin_admissible,
    nielsen_classify, riemann_hurwitz_genus, GammaIndexReport, NielsenClass, SurfaceHom,
    SurfacePresentation,
};

use thiserror::Error;

/// Failures across the cover-bookkeeping machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoversError {
    #[error("invalid permutation: {detail}")]
    BadPermutation { detail: String },
    #[error("cannot parse cycle notation: {detail}")]
    CycleParse { detail: String },
    #[error("group closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("enumeration of {count} homomorphisms exceeds the cap {cap}")]
    EnumerationCapExceeded { count: u128, cap: u64 },
    #[error("invalid surface data: {detail}")]
    BadSurface { detail: String },
    #[error("expected {expected} generator images, got {got}")]
    ImageCountMismatch { expected: usize, got: usize },
    #[error("permutation degrees disagree: {detail}")]
    DegreeMismatch { detail: String },
    #[error("the closed-surface relator must map to the identity, got {image}")]
    RelatorNotSatisfied { image: String },
    #[error("invalid ramification data: {detail}")]
    BadRamification { detail: String },
    #[error("the cover genus is not an integer: 2h - 2 = {twice}")]
    NonIntegralGenus { twice: i64 },
    #[error("invalid matrix: {detail}")]
    BadMatrix { detail: String },
    #[error("matrix for {label} is not invertible over the integers")]
    NotUnimodular { label: String },
    #[error("cannot parse word: {detail}")]
    BadWord { detail: String },
    #[error("unsupported input: {detail}")]
    Unsupported { detail: String },
}
