//! Numerical core of `orliczlab`.
//!
//! Gauge functions, convergence classification of the Calderon-type and
//! Orlicz-type integral conditions, the extremal radial profile and the
//! lattice counterexample built from it, mean-oscillation functionals, ring
//! modulus bounds and pointwise distortion estimates.
//!
//! The crate is `no_std` (it needs `alloc`). All transcendental functions go
//! through `libm`, so a given input produces the same bits on every target.
#![cfg_attr(not(test), no_std)]
#![deny(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod constants;
pub mod counterexample;
pub mod distortion;
pub mod error;
pub mod extremal;
pub mod integral;
mod math;
pub mod modulus;
pub mod numeric;
pub mod orlicz;
pub mod oscillation;
pub mod report;
pub mod spec;
pub mod weight;

pub use constants::ConstantsConfig;
pub use error::{Error, Result};
pub use orlicz::{Gauge, OrliczFunction};
pub use report::{Status, VerificationReport};
pub use weight::RadialWeight;
