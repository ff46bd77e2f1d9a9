//! Smooth convex functions over open convex sets.
//!
//! The crate bundles four pieces that fit together:
//!
//! - [`counterexample`]: an exact-arithmetic convex spline on a half-plane that is
//!   1-smooth and convex but violates the unconstrained co-coercivity inequality.
//! - [`bounds`]: the analytical inequalities (descent lemma, co-coercivity, the
//!   local and global bounds for open domains) and the chain helpers.
//! - [`chain_qcqp`]: the chain programs bounding `f(y)` from endpoint data, with a
//!   small log-barrier interior-point solver and brute-force oracles.
//! - [`interpolation`]: realizes a feasible chain as an L-smooth convex function
//!   along the segment `[x, y]`.
//!
//! The [`cli`] module wires everything into the `smoothcvx` binary.

pub mod bounds;
pub mod chain_qcqp;
pub mod cli;
pub mod counterexample;
pub mod error;
pub mod interpolation;
pub mod numfmt;
pub mod report;
pub mod vector;

pub use bounds::{Interval, PointData};
pub use error::{Error, Result};
