//! Radial diffraction intensity as a finite Bessel sum, and the square
//! lattice powder pattern it is compared against.

mod bessel;
mod powder;
mod profile;

pub use bessel::{bessel_j0, MAX_ARGUMENT, SERIES_LIMIT};
pub use powder::{powder_reference, PowderReference, PowderRing};
pub use profile::{intensity_profile, ring_intensity, uniform_grid, IntensityProfile};
