use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::r2;
use crate::error::{Error, Result};

/// One powder ring of the unit square lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct PowderRing {
    pub m: u64,
    pub k: f64,
    pub weight: BigRational,
}

/// Rotation-averaged diffraction of the unit square lattice: a ring at
/// `k = √m` carrying `r2(m)` lattice points, times a common factor.
#[derive(Clone, Debug, PartialEq)]
pub struct PowderReference {
    pub rings: Vec<PowderRing>,
    pub normalization: BigRational,
}

pub fn powder_reference(mmax: u64) -> Result<PowderReference> {
    if mmax == 0 {
        return Err(Error::Input("mmax must be at least 1".into()));
    }
    let rings = (1..=mmax)
        .filter_map(|m| {
            let w = r2(m);
            (w > 0).then(|| PowderRing {
                m,
                k: (m as f64).sqrt(),
                weight: BigRational::from_integer(w.into()),
            })
        })
        .collect();
    Ok(PowderReference {
        rings,
        normalization: BigRational::one(),
    })
}

impl PowderReference {
    /// Rescales all weights so that the ring at `k = 1` equals `target`.
    pub fn normalized_to(&self, target: f64) -> Result<PowderReference> {
        let target = BigRational::from_float(target)
            .ok_or_else(|| Error::Input(format!("normalization target must be finite, got {target}")))?;
        let first = self
            .rings
            .iter()
            .find(|r| r.m == 1)
            .ok_or_else(|| Error::Input("no ring at k = 1".into()))?;
        if first.weight.is_zero() {
            return Err(Error::Input("ring at k = 1 has zero weight".into()));
        }
        let factor = target / &first.weight;
        Ok(PowderReference {
            rings: self
                .rings
                .iter()
                .map(|r| PowderRing {
                    weight: &r.weight * &factor,
                    ..r.clone()
                })
                .collect(),
            normalization: &self.normalization * &factor,
        })
    }
}
