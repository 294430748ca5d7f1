//! Relaxed Newton maps `N(z) = z - h p(z)/p'(z)` studied as rational maps of
//! the Riemann sphere.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! computation over `Complex64`; file formats, JSON and the command line
//! live in the `renewt` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod characterize;
pub mod constructions;
pub mod dynamics;
mod error;
pub mod geometry;
pub mod map;
pub mod mobius;
pub mod poly;
pub mod render;
pub mod roots;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use map::{Point, RelaxedNewtonMap};
pub use poly::{AffineMap, FactoredPolynomial, Polynomial};

/// Shorthand for building a `Complex64`.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
