//! Algebraic engine for unstable exact couples and coniveau spectral sequences
//! over finite and finitely generated data.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod world;
pub mod error;
pub mod hcomplex;
pub mod pi;
pub mod spectral;
pub mod coniveau;

pub use error::{Error, Result};
