use std::fmt;
use std::ops::Add;

use super::gauss::GaussInt;
use super::point5::Point5;

/// An element `quarter·π/2 + dphi·2φ` of the rotation group generated by a
/// quarter turn and twice the pinwheel angle `φ = −arctan(1/2)`.
///
/// `2φ/π` is irrational, so the pair is a unique representation and
/// `dphi` is never reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AngleIndex {
    pub quarter: u8,
    pub dphi: u32,
}

impl AngleIndex {
    pub const ZERO: AngleIndex = AngleIndex { quarter: 0, dphi: 0 };

    pub fn new(quarter: i64, dphi: u32) -> Self {
        AngleIndex {
            quarter: quarter.rem_euclid(4) as u8,
            dphi,
        }
    }

    /// Adds `k` quarter turns (k may be negative).
    pub fn turn(self, k: i64) -> Self {
        AngleIndex::new(self.quarter as i64 + k, self.dphi)
    }

    /// The angle in radians.
    pub fn radians(self) -> f64 {
        let two_phi = -2.0 * 0.5f64.atan();
        self.quarter as f64 * std::f64::consts::FRAC_PI_2 + self.dphi as f64 * two_phi
    }
}

impl Add for AngleIndex {
    type Output = AngleIndex;
    fn add(self, rhs: AngleIndex) -> AngleIndex {
        AngleIndex {
            quarter: (self.quarter + rhs.quarter) % 4,
            dphi: self.dphi + rhs.dphi,
        }
    }
}

impl fmt::Display for AngleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.quarter, self.dphi)
    }
}

/// Numerator of `e^{2iφ} = (3 − 4i)/5`.
pub fn two_phi_numerator() -> GaussInt {
    GaussInt::new(3, -4)
}

/// `√5·e^{iφ} = 2 − i`, the inflation multiplier.
pub fn inflation_multiplier() -> GaussInt {
    GaussInt::new(2, -1)
}

/// Exact `e^{iθ} = i^quarter · ((3 − 4i)/5)^dphi`.
pub fn unit_vector(theta: AngleIndex) -> Point5 {
    let num = two_phi_numerator()
        .pow(theta.dphi)
        .rotate_quarters(theta.quarter);
    Point5::new(num, theta.dphi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gauss::pow5;
    use crate::arith::point5::point;
    use proptest::prelude::*;

    #[test]
    fn unit_vector_examples() {
        assert_eq!(unit_vector(AngleIndex::new(1, 0)), point(0, 1, 0));
        assert_eq!(unit_vector(AngleIndex::new(0, 1)), point(3, -4, 1));
        assert_eq!(unit_vector(AngleIndex::new(2, 1)), point(-3, 4, 1));
    }

    #[test]
    fn radians_agree_with_unit_vector() {
        for q in 0..4 {
            for d in 0..6 {
                let a = AngleIndex::new(q, d);
                let (x, y) = unit_vector(a).to_f64();
                let t = a.radians();
                assert!((x - t.cos()).abs() < 1e-12 && (y - t.sin()).abs() < 1e-12);
            }
        }
    }

    fn arb_angle() -> impl Strategy<Value = AngleIndex> {
        (0i64..4, 0u32..12).prop_map(|(q, d)| AngleIndex::new(q, d))
    }

    proptest! {
        #[test]
        fn unit_vector_is_a_homomorphism(a in arb_angle(), b in arb_angle()) {
            prop_assert_eq!(unit_vector(a + b), unit_vector(a).mul(&unit_vector(b)));
        }

        #[test]
        fn unit_modulus(a in arb_angle()) {
            let u = unit_vector(a);
            prop_assert_eq!(u.num().norm(), pow5(2 * u.exp5()));
        }
    }
}
