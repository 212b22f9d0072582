//! Exact-arithmetic toolkit for weighted-flag ("parabolic") invariants of
//! vector bundles on marked curves, together with the supporting machinery
//! that the invariants feed: slope-polygon constraint checking, rank-bound
//! certificates, and finite-cover bookkeeping for surface groups.
//!
//! Everything is computed over the rationals with no floating point and no
//! tolerances; equal inputs produce byte-identical serialized outputs.
//!
//! The crate is organised in four library modules plus a CLI binary:
//!
//! * [`exactlin`] — exact rational linear algebra: canonical row-reduced
//!   subspaces, intersections, and quotient projections.
//! * [`parabolic`] — weighted flags on marked curves: degree/slope
//!   invariants, tensor/dual/shift/twist operations, and induced structures
//!   on sub- and quotient bundles.
//! * [`hnengine`] — slope polygons (strictly decreasing slope profiles),
//!   section-count bounds, rank-bound certificates, constraint reports, and
//!   a candidate-polygon enumerator.
//! * [`covers`] — permutation-group surface homomorphisms, conjugation
//!   classification, branched-cover genus arithmetic, and integer-matrix
//!   representations with a power-commutation test.

pub mod cli;
pub mod covers;
pub mod exactlin;
pub mod hnengine;
pub mod parabolic;
pub mod rational;

pub use rational::Rational;
