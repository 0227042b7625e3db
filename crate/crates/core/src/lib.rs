//! Exact arithmetic for iterated rational maps over `Q`, `GF(p^m)` and
//! `F_p(t)`: iterates, preimage factorization and eventual-stability
//! certificates.

pub mod arith;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod factor;
pub mod parse;
pub mod poly;
pub mod stability;

pub use error::{Error, Result};
