//! Exact arithmetic: Gaussian integers, points with power-of-5 denominators,
//! the pinwheel rotation group, squared-distance classes and the
//! sum-of-two-squares function.

mod angle;
mod factor;
mod gauss;
mod point5;
mod sqdist;

pub use angle::{inflation_multiplier, two_phi_numerator, unit_vector, AngleIndex};
pub use factor::{factorize, is_prime, r2, valuation5};
pub use gauss::{pow5, GaussInt};
pub use point5::{point, Point5};
pub use sqdist::{reduce_sqdist, SqDist};
