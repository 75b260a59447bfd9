//! Pinwheel tiles, the exact substitution rule, patch generation and the
//! orientation/chirality census.

mod census;
mod patch;
mod tile;

pub use census::{census_count, census_matrix, census_recursion, Census, XPoly, XPolyMatrix};
pub use patch::{inflate, Patch, Seed, DEFAULT_MAX_TILES};
pub use tile::{doubled_area, triangle_contains, Chirality, RatPoint, Tile};
