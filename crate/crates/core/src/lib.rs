//! Exact construction, decomposition and rank certification of
//! biquadratic forms `Σ a_{ijkl} x_i x_k y_j y_l`.
//!
//! The crate is `#![no_std]` and only needs `alloc`. Coefficients live in
//! the ring of radical rationals ([`Scalar`]), so every decomposition is
//! checked by exact symbolic expansion. Indices are 0-based throughout;
//! front ends translate to 1-based notation at the I/O boundary.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod certify;
pub mod decompose;
pub mod error;
pub mod families;
pub mod oracle;

pub use algebra::{
    BilinearForm, BiquadForm, Cell, Monomial, Rational, Rectangle, Scalar, SosDecomposition,
    SupportPattern,
};
pub use error::{Error, Result};
