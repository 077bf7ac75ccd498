//! Exact tools for compact components of SU(p,q) parabolic Higgs moduli over a
//! punctured sphere, and for GIT stability of the Kronecker data behind them.

pub mod error;
pub mod exactlin;
pub mod feathered;
pub mod higgsbridge;
pub mod json;
pub mod kronecker;
pub mod multiweight;
pub mod realforms;
pub mod weightgen;

pub use error::{Error, Result};
