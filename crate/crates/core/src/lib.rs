//! Exact polyhedral geometry for truthful auction mechanisms.

pub mod config;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod mechanism;
pub mod render;
pub mod report;
pub mod scalar;
pub mod subdivision;
pub mod tropical;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar, SmallRational};
