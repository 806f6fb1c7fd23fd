//! Exact and truncated computation with motivic exponential functions.

pub mod error;
pub mod characters;
pub mod cli;
pub mod cyclo;
pub mod eval;
pub mod fourier;
pub mod ir;
pub mod lindep;
pub mod limits;
pub mod localfield;
pub mod reduction;
pub mod transfer;

pub use error::{Error, Result};
