//! Exact arithmetic for β-expansions.
//!
//! Everything here is computed in exact arithmetic: orbits of the
//! β-transformation live in ℚ or ℚ(√d), cylinder geometry is derived from
//! the quasi-greedy expansion of 1, and quantities that are genuinely
//! irrational (logarithms, rational powers) are returned as rigorous dyadic
//! brackets instead of floats.
//!
//! The crate is `no_std` (with `alloc`); IO, the CLI and file formats live
//! in the companion `betax` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod exactnum;
pub mod expansion;
pub mod shift;
pub mod approxmap;
pub mod experiments;
pub mod fractal;

pub use error::{Error, Result};
pub use exactnum::ExactReal;

