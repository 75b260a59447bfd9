use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::gauss::GaussInt;
use crate::error::{Error, Result};

/// A squared distance `m / 5^l` in reduced form (`l == 0` or `5 ∤ m`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqDist {
    m: BigUint,
    l: u32,
}

impl SqDist {
    /// Builds a reduced squared distance from an arbitrary `m / 5^l`.
    pub fn new(m: impl Into<BigUint>, l: u32) -> Result<Self> {
        let mut m = m.into();
        if m.is_zero() {
            return Err(Error::Input("squared distance must be positive".into()));
        }
        let mut l = l;
        let five = BigUint::from(5u32);
        while l > 0 {
            let (q, r) = m.div_rem(&five);
            if !r.is_zero() {
                break;
            }
            m = q;
            l -= 1;
        }
        Ok(SqDist { m, l })
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// `m / 5^l` in floating point.
    pub fn value(&self) -> f64 {
        self.m.to_f64().unwrap_or(f64::INFINITY) / 5f64.powi(self.l as i32)
    }

    /// The distance `sqrt(m / 5^l)`.
    pub fn r(&self) -> f64 {
        self.value().sqrt()
    }
}

impl Ord for SqDist {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.l == other.l {
            return self.m.cmp(&other.m);
        }
        let five = BigUint::from(5u32);
        let lhs = &self.m * five.pow(other.l);
        let rhs = &other.m * five.pow(self.l);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for SqDist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SqDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/5^{}", self.m, self.l)
    }
}

/// Squared length of `delta / 5^exp5`, reduced.
pub fn reduce_sqdist(delta: &GaussInt, exp5: u32) -> Result<SqDist> {
    if delta.is_zero() {
        return Err(Error::Input("zero displacement has no distance class".into()));
    }
    let norm: BigInt = delta.norm();
    let m = norm.to_biguint().expect("norm is nonnegative");
    SqDist::new(m, 2 * exp5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sd(m: u64, l: u32) -> SqDist {
        SqDist::new(m, l).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_sqdist(&GaussInt::new(1, 2), 1).unwrap(), sd(1, 1));
        assert_eq!(reduce_sqdist(&GaussInt::new(1, 0), 0).unwrap(), sd(1, 0));
        let big = reduce_sqdist(&GaussInt::new(3, 4), 0).unwrap();
        assert_eq!((big.m().clone(), big.l()), (BigUint::from(25u32), 0));
    }

    #[test]
    fn zero_rejected() {
        assert!(reduce_sqdist(&GaussInt::zero(), 2).is_err());
        assert!(SqDist::new(0u32, 0).is_err());
    }

    #[test]
    fn ordering_is_by_value() {
        let mut v = [sd(2, 0), sd(1, 1), sd(26, 2), sd(1, 0), sd(6, 1)];
        v.sort();
        let vals: Vec<f64> = v.iter().map(|s| s.value()).collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]), "{vals:?}");
        assert_eq!(sd(5, 1), sd(1, 0));
    }
}
