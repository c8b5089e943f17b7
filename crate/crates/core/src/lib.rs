//! Nodal domains of finite sums of planar cosine waves.
//!
//! The crate works with functions of the form
//!
//! ```text
//! f(x) = Σ aᵢ cos(kᵢ·x + θᵢ),   x ∈ ℝ²
//! ```
//!
//! and provides:
//!
//! - [`wave`]: the wave model, its sup-norm and Lipschitz bounds, translation,
//!   the symmetric spectral measure and the sum-to-product pair collapse.
//! - [`criteria`]: finite-height checks of the two hypotheses under which such a
//!   sum has a quadratic number of stable compact nodal domains (independence
//!   of the wavevectors, non-domination of amplitudes inside direction
//!   buckets), plus the pairing decomposition used to turn near-balanced
//!   buckets into equal-amplitude pairs.
//! - [`census`]: plain and Lipschitz-certified nodal-domain counts on a grid.
//!   A certified component comes with a ring of cells whose sign cannot change
//!   under any perturbation of sup-norm at most the margin, so it is a lower
//!   bound for the number of stable compact nodal domains.
//! - [`constructors`]: explicit three-wave ensembles with a stable compact
//!   domain around the origin, the small-term padding cap, lattice points on
//!   circles and torus eigenfunctions.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line live in the `nodal-lab` crate.

#![no_std]
// `!(x > 0.0)` is what rejects NaN parameters.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod census;
pub mod constructors;
pub mod criteria;
mod error;
mod geom;
mod math;
mod unionfind;
pub mod wave;

pub use error::{Error, Result};
pub use geom::Vec2;
