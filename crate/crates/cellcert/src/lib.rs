//! Certified cell radii for one-bit Gaussian hyperplane tessellations of the
//! sphere, Monte Carlo checks of the concentration estimates behind them, and a
//! subset-plus-signs vector codec built on the same cells.

pub mod certifier;
pub mod codec;
pub mod error;
pub mod harness;
pub mod lab;
pub mod numeric;
pub mod tessellation;

pub use error::{Error, Result};
