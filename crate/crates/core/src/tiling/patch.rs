use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::tile::{Chirality, Tile};
use crate::error::{Error, Result};

/// Largest patch `inflate` will build unless told otherwise.
pub const DEFAULT_MAX_TILES: usize = 4 * 5usize.pow(9);

/// How a patch was seeded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Seed {
    /// The tile `(0, 0, +1)`, whose first child is itself; iterates nest.
    Single,
    /// One tile of each chirality at the origin. Only meaningful for
    /// counting, since the two triangles overlap.
    CensusPair,
    /// Anything else.
    Custom,
}

impl Seed {
    pub fn tiles(self) -> Vec<Tile> {
        match self {
            Seed::Single => vec![Tile::origin(Chirality::Plus)],
            Seed::CensusPair => vec![Tile::origin(Chirality::Plus), Tile::origin(Chirality::Minus)],
            Seed::Custom => Vec::new(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Seed::Single => "single",
            Seed::CensusPair => "census-pair",
            Seed::Custom => "custom",
        }
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Seed {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Seed::Single),
            "census-pair" => Ok(Seed::CensusPair),
            _ => Err(Error::Input(format!("unknown seed '{s}' (expected single or census-pair)"))),
        }
    }
}

/// A finite set of tiles obtained by repeated substitution of a seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    tiles: Vec<Tile>,
    generation: u32,
    seed: Seed,
}

impl Patch {
    pub fn from_seed(seed: Seed) -> Self {
        Patch {
            tiles: seed.tiles(),
            generation: 0,
            seed,
        }
    }

    pub fn from_tiles(tiles: Vec<Tile>, generation: u32) -> Self {
        Patch {
            tiles,
            generation,
            seed: Seed::Custom,
        }
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    /// Applies the substitution `steps` times with the default size budget.
    pub fn inflate(&self, steps: u32) -> Result<Patch> {
        self.inflate_with_budget(steps, DEFAULT_MAX_TILES)
    }

    /// Applies the substitution `steps` times. Children appear in parent
    /// order, five per parent, whatever the thread schedule.
    pub fn inflate_with_budget(&self, steps: u32, max_tiles: usize) -> Result<Patch> {
        let target = 5usize
            .checked_pow(steps)
            .and_then(|f| f.checked_mul(self.tiles.len()));
        match target {
            Some(n) if n <= max_tiles => {}
            _ => {
                return Err(Error::Size(format!(
                    "{} tiles x 5^{steps} exceeds the budget of {max_tiles} tiles",
                    self.tiles.len()
                )))
            }
        }
        let mut tiles = self.tiles.clone();
        for _ in 0..steps {
            tiles = tiles.par_iter().flat_map_iter(|t| t.substitute()).collect();
        }
        Ok(Patch {
            tiles,
            generation: self.generation + steps,
            seed: self.seed,
        })
    }
}

/// `σ^steps` of the given seed.
pub fn inflate(seed: Seed, steps: u32) -> Result<Patch> {
    Patch::from_seed(seed).inflate(steps)
}
