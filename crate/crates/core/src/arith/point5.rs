use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::gauss::{pow5, GaussInt};

/// An exact point `num / 5^exp5` of the complex plane.
///
/// Values are kept normalized: either `exp5 == 0` or `num` is not divisible
/// by 5, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Point5 {
    num: GaussInt,
    exp5: u32,
}

impl Point5 {
    pub fn new(num: GaussInt, exp5: u32) -> Self {
        let mut p = Point5 { num, exp5 };
        p.normalize();
        p
    }

    pub fn from_gauss(num: GaussInt) -> Self {
        Point5 { num, exp5: 0 }
    }

    pub fn zero() -> Self {
        Point5::default()
    }

    pub fn num(&self) -> &GaussInt {
        &self.num
    }

    pub fn exp5(&self) -> u32 {
        self.exp5
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp5 = 0;
            return;
        }
        while self.exp5 > 0 && self.num.divisible_by_5() {
            self.num = self.num.div5_exact();
            self.exp5 -= 1;
        }
    }

    /// Numerator rescaled to the denominator `5^exp5`, which must be at
    /// least `self.exp5()`.
    pub fn numerator_at(&self, exp5: u32) -> GaussInt {
        assert!(exp5 >= self.exp5, "target denominator too small");
        if exp5 == self.exp5 {
            self.num.clone()
        } else {
            self.num.scale(&pow5(exp5 - self.exp5))
        }
    }

    pub fn mul_gauss(&self, z: &GaussInt) -> Point5 {
        Point5::new(&self.num * z, self.exp5)
    }

    pub fn mul(&self, other: &Point5) -> Point5 {
        Point5::new(&self.num * &other.num, self.exp5 + other.exp5)
    }

    /// Nearest floating-point coordinates.
    pub fn to_f64(&self) -> (f64, f64) {
        let den = 5f64.powi(self.exp5 as i32);
        let re = self.num.re.to_f64().unwrap_or(f64::NAN);
        let im = self.num.im.to_f64().unwrap_or(f64::NAN);
        (re / den, im / den)
    }
}

fn combine(a: &Point5, b: &Point5, op: impl Fn(&GaussInt, &GaussInt) -> GaussInt) -> Point5 {
    let e = a.exp5.max(b.exp5);
    let (na, nb) = (a.numerator_at(e), b.numerator_at(e));
    Point5::new(op(&na, &nb), e)
}

impl<'a> Add<&'a Point5> for &'a Point5 {
    type Output = Point5;
    fn add(self, rhs: &Point5) -> Point5 {
        combine(self, rhs, |x, y| x + y)
    }
}

impl<'a> Sub<&'a Point5> for &'a Point5 {
    type Output = Point5;
    fn sub(self, rhs: &Point5) -> Point5 {
        combine(self, rhs, |x, y| x - y)
    }
}

impl Neg for &Point5 {
    type Output = Point5;
    fn neg(self) -> Point5 {
        Point5 {
            num: -&self.num,
            exp5: self.exp5,
        }
    }
}

impl From<GaussInt> for Point5 {
    fn from(z: GaussInt) -> Self {
        Point5::from_gauss(z)
    }
}

impl fmt::Display for Point5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/5^{}", self.num, self.exp5)
    }
}

/// Helper used by tests and callers that build points from small integers.
pub fn point(re: i64, im: i64, exp5: u32) -> Point5 {
    Point5::new(GaussInt::new(BigInt::from(re), BigInt::from(im)), exp5)
}
