//! Numerical engine for relativistic Hamiltonian dynamics in an invariant
//! world time, and for the conformal pairing that trades a world scalar
//! potential for a conformally modified metric.
//!
//! The crate covers four layers:
//!
//! * [`tensor`] — fixed-dimension (4x4) metric arithmetic: inverses, index
//!   raising/lowering, connection coefficients, and a uniform derivative
//!   contract for position-dependent metrics.
//! * [`fields`] — the world scalar field, the conformal factor
//!   `F = k / (k - Phi)`, unit timelike vector fields with `U.U = -1`, and
//!   antisymmetric gauge generators `omega(s)`.
//! * [`orbit`] / [`dual`] — Hamilton's equations in world time `tau`,
//!   RK4/RK45 integration, geodesic-residual diagnostics, and the orbit-wise
//!   map onto the conformally dual description together with its
//!   `z`-variable embedding.
//! * [`kk`] / [`gauge`] — the five-dimensional block-metric contraction that
//!   reproduces the vector-scalar Hamiltonian, and the infinitesimal gauge
//!   algebra that moves `U` on its hyperboloid while preserving `U.U = -1`.
//!
//! Everything here is pure computation on immutable values; IO, scenario
//! configuration and report formats live in the companion CLI crate. The
//! crate is `no_std`-compatible (`alloc` required) when built without the
//! default `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]
// index-heavy tensor contractions read better as explicit loops
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod dual;
pub mod error;
pub mod fields;
pub mod gauge;
pub mod kk;
pub mod numerics;
pub mod orbit;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{Mat4, Metric4, MetricField, SpacetimePoint, DIM};

/// Signature convention used throughout: (-,+,+,+), geometric units, c = 1.
pub const SIGNATURE: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];
