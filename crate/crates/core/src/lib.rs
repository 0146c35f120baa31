//! Modulus-chain solver for `3^x = 2^a1 + ... + 2^an` and `2^x = 3^a1 + ... + 3^an`
//! with distinct exponents.

pub mod dlog;
pub mod error;
pub mod modcore;
pub mod planner;
pub mod solver;

pub use error::{Error, Result};
