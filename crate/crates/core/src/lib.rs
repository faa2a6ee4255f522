//! Exact semistable reduction for `SL_n`/`GL_n`-bundles on the projective line over
//! a discrete valuation ring, with the root-datum combinatorics it relies on.
//!
//! Scalars are exact rational functions in `u = pi^{1/N}` over `Q` or `F_p`; the
//! loop variable `t` is handled by truncated Laurent series with explicit
//! precision tracking. Nothing here does IO, and the crate is `no_std` + `alloc`.

#![no_std]

extern crate alloc;

pub mod bundles;
pub mod deformation;
pub mod engine;
pub mod error;
pub mod field;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod rootdata;
pub mod scalar;
pub mod series;

pub use error::{AlgebraError, BundleError, RootDataError};
pub use field::{Coeff, GroundField};
pub use matrix::LMatrix;
pub use scalar::PuiseuxScalar;
pub use series::TLaurent;
