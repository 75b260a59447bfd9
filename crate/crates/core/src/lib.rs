//! Pinwheel substitution tilings, their orientation census, exact pair
//! correlations of weighted control-point sets and radial diffraction.

pub mod analysis;
pub mod arith;
pub mod correlation;
pub mod diffraction;
pub mod tiling;
pub mod error;
pub mod io;

pub use error::{Error, Result};
