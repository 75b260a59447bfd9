use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{inflation_multiplier, pow5, unit_vector, AngleIndex, GaussInt, Point5};

/// Handedness of a pinwheel triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn sign(self) -> i64 {
        match self {
            Chirality::Plus => 1,
            Chirality::Minus => -1,
        }
    }

    pub fn from_sign(s: i64) -> Option<Self> {
        match s {
            1 => Some(Chirality::Plus),
            -1 => Some(Chirality::Minus),
            _ => None,
        }
    }
}

impl Neg for Chirality {
    type Output = Chirality;
    fn neg(self) -> Chirality {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }
}

/// A pinwheel triangle given by its control point, the direction of its
/// short edge and its chirality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tile {
    pub point: Point5,
    pub angle: AngleIndex,
    pub chi: Chirality,
}

/// An exact point with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl RatPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        RatPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64, den: i64) -> Self {
        RatPoint {
            x: BigRational::new(x.into(), den.into()),
            y: BigRational::new(y.into(), den.into()),
        }
    }

    /// Complex multiplication by a Gaussian integer.
    pub fn mul_gauss(&self, z: &GaussInt) -> RatPoint {
        let (a, b) = (
            BigRational::from_integer(z.re.clone()),
            BigRational::from_integer(z.im.clone()),
        );
        RatPoint {
            x: &self.x * &a - &self.y * &b,
            y: &self.x * &b + &self.y * &a,
        }
    }

    pub fn sub(&self, other: &RatPoint) -> RatPoint {
        RatPoint {
            x: &self.x - &other.x,
            y: &self.y - &other.y,
        }
    }

    pub fn norm_sq(&self) -> BigRational {
        &self.x * &self.x + &self.y * &self.y
    }
}

/// Doubled prototile corners (right-angle corner, short-leg end, long-leg
/// end) relative to the control point. The minus tile is the mirror image
/// of the plus tile in the line of its short edge direction, so that `ω`
/// always points from the right-angle corner along the short leg.
fn doubled_prototile(chi: Chirality) -> [GaussInt; 3] {
    match chi {
        Chirality::Plus => [
            GaussInt::new(-1, -1),
            GaussInt::new(1, -1),
            GaussInt::new(-1, 3),
        ],
        Chirality::Minus => [
            GaussInt::new(-1, 1),
            GaussInt::new(1, 1),
            GaussInt::new(-1, -3),
        ],
    }
}

impl Tile {
    pub fn new(point: Point5, angle: AngleIndex, chi: Chirality) -> Self {
        Tile { point, angle, chi }
    }

    /// The tile with control point 0, horizontal short edge and the given
    /// chirality.
    pub fn origin(chi: Chirality) -> Self {
        Tile::new(Point5::zero(), AngleIndex::ZERO, chi)
    }

    /// One inflation step: scale by `√5`, rotate by `φ`, dissect into five
    /// tiles. The first child of a tile at the origin is the tile itself.
    pub fn substitute(&self) -> [Tile; 5] {
        let chi = self.chi;
        let s = chi.sign();
        // ω + φ − χφ: unchanged for χ = +1, one extra 2φ for χ = −1
        let base = match chi {
            Chirality::Plus => self.angle,
            Chirality::Minus => AngleIndex {
                quarter: self.angle.quarter,
                dphi: self.angle.dphi + 1,
            },
        };
        let flipped = base.turn(2);
        let side = base.turn(s);
        let u_side = unit_vector(side);
        let u_base = unit_vector(base);

        let origin = self.point.mul_gauss(&inflation_multiplier());
        let two = GaussInt::new(2, 0);
        [
            Tile::new(origin.clone(), base, chi),
            Tile::new(&origin + &u_side, flipped, chi),
            Tile::new(&origin + &u_side.mul_gauss(&two), flipped, -chi),
            Tile::new(&origin - &u_base, flipped, -chi),
            Tile::new(&origin - &u_side, base.turn(-s), -chi),
        ]
    }

    /// Exact vertices `x + R_ω·V_χ`, in the order right-angle corner,
    /// short-leg end, long-leg end. Coordinates have denominators `2·5^ℓ`.
    pub fn vertices(&self) -> [RatPoint; 3] {
        let rot = unit_vector(self.angle);
        let e = self.point.exp5().max(rot.exp5());
        let x2 = self.point.numerator_at(e).scale(&BigInt::from(2));
        let r = rot.numerator_at(e);
        let r = Point5::new(r, e);
        let den = pow5(e) * BigInt::from(2);
        doubled_prototile(self.chi).map(|v| {
            // numerator over 2·5^e
            let rv = r.mul_gauss(&v).numerator_at(e);
            let n = &x2 + &rv;
            RatPoint::new(
                BigRational::new(n.re, den.clone()),
                BigRational::new(n.im, den.clone()),
            )
        })
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.chi == Chirality::Plus { '+' } else { '-' };
        write!(f, "[{}, {}, {}]", self.point, self.angle, c)
    }
}

/// Twice the signed area of the triangle `(a, b, c)`.
pub fn doubled_area(a: &RatPoint, b: &RatPoint, c: &RatPoint) -> BigRational {
    let u = b.sub(a);
    let v = c.sub(a);
    &u.x * &v.y - &u.y * &v.x
}

/// Whether `p` lies inside or on the boundary of the triangle `tri`.
pub fn triangle_contains(tri: &[RatPoint; 3], p: &RatPoint) -> bool {
    use num_traits::Signed;
    let d = [
        doubled_area(&tri[0], &tri[1], p),
        doubled_area(&tri[1], &tri[2], p),
        doubled_area(&tri[2], &tri[0], p),
    ];
    let has_neg = d.iter().any(|x| x.is_negative());
    let has_pos = d.iter().any(|x| x.is_positive());
    !(has_neg && has_pos)
}
