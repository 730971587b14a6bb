//! Boundary-regularity toolkit for the p-parabolic equation
//! ∂ₜu = Δₚu := div(|∇u|^{p-2}∇u) on soda can domains
//!
//! ```text
//! Θ_{l,θ} = {(x,t) : 0 < -t < θ|x|^l < θ},
//! ```
//!
//! whose time slices are annuli shrinking onto the origin at the final time.
//! The crate provides:
//!
//! - [`geometry`]: the domain family, membership and slice queries;
//! - [`pcalc`]: closed-form radial p-Laplacian formulas plus an independent
//!   finite-difference residual oracle;
//! - [`barriers`]: every explicit barrier and supersolution construction
//!   (power barriers, κ-barriers, radial ODE barriers, fast-diffusion
//!   supersolutions, Barenblatt barriers, min-pasting) with verification
//!   predicates;
//! - [`scaling`]: the parabolic scaling transform ũ(x,t) = A u(ax, bt);
//! - [`wiener`]: heat-equation machinery — fundamental solution, thermal
//!   capacity bounds for cylinders, Wiener partial sums, divergence tests;
//! - [`solver`]: a monotone explicit radial solver with a moving inner
//!   boundary, used to probe regularity of the final point empirically;
//! - [`classifier`]: the (n, p, l, θ) ↦ regularity verdict map with a full
//!   table audit.

// validation guards are written as `!(x > 0.0)` on purpose: NaN must fail
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barriers;
pub mod classifier;
pub mod error;
pub mod geometry;
pub mod pcalc;
pub mod quad;
pub mod sample;
pub mod scaling;
pub mod solver;
pub mod special;
pub mod wiener;

pub use error::{Error, Result};
pub use geometry::{DomainSpec, Params, RadialProfile, SpaceTimePoint, TimeSlice};
pub use pcalc::CandidateFunction;
