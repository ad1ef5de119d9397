//! Gauss-Newton for sparse polynomial systems in double, double-double and
//! quad-double arithmetic.
//!
//! The pipeline per Newton step is: evaluate the system and its Jacobian
//! with tree-structured products ([`evaldiff`]), solve the least-squares
//! update with modified Gram-Schmidt ([`mgs`]), and apply it ([`newton`]).
//! Everything is generic over [`xprec::Scalar`].
//!
//! The crate is `no_std` with `alloc` when the default `std` feature is off.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bench;
pub mod error;
pub mod evaldiff;
pub mod exec;
pub mod mgs;
pub mod newton;
pub mod polyrep;
pub mod reduce;
pub mod xprec;

pub use error::Error;
pub use exec::{Executor, Serial, Shuffled};
pub use xprec::{Complex, DoubleDouble, Precision, QuadDouble, RealScalar, Scalar};
