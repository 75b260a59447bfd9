//! Slow, independent reference implementations.
//!
//! Nothing here shares code with the library under test; inputs and
//! outputs are plain integers, rationals and floats.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const FRAC_BITS: u64 = 400;

/// `J₀(z)` from its power series in 400-bit fixed point.
pub fn j0_series(z: f64) -> f64 {
    assert!(z.is_finite() && z >= 0.0);
    let one = BigInt::one() << FRAC_BITS;
    let zq = BigRational::from_float(z).unwrap();
    let zfix = (zq * BigRational::from_integer(one.clone())).round().to_integer();
    // q = (z/2)²
    let q = (&zfix * &zfix) >> (FRAC_BITS + 2);
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut j: u64 = 1;
    loop {
        term = (&term * &q) >> FRAC_BITS;
        term /= BigInt::from(j * j);
        if j % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        if term.is_zero() {
            break;
        }
        j += 1;
    }
    BigRational::new(sum, one).to_f64().unwrap()
}

/// Root of `J₀` in `[a, b]` by bisection on the series.
pub fn j0_root(mut a: f64, mut b: f64) -> f64 {
    let fa = j0_series(a);
    assert!(fa * j0_series(b) < 0.0, "no sign change");
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        if (j0_series(mid) > 0.0) == (fa > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Number of `(p, q) ∈ ℤ²` with `p² + q² = m`, by enumeration.
pub fn r2_brute(m: u64) -> u64 {
    let mut count = 0;
    let mut p: u64 = 0;
    while p * p <= m {
        let rest = m - p * p;
        let q = rest.sqrt();
        if q * q == rest {
            count += match (p, q) {
                (0, 0) => 1,
                (0, _) | (_, 0) => 2,
                _ => 4,
            };
        }
        p += 1;
    }
    count
}

/// Table of `r2_brute(m)` for `0 ≤ m ≤ mmax`, by sweeping all lattice points.
pub fn r2_table(mmax: u64) -> Vec<u64> {
    let mut t = vec![0u64; mmax as usize + 1];
    let s = (mmax as f64).sqrt() as i64 + 1;
    for p in -s..=s {
        for q in -s..=s {
            let n = (p * p + q * q) as u64;
            if n <= mmax {
                t[n as usize] += 1;
            }
        }
    }
    t
}

/// A weighted point `(re + i·im) / 5^exp5`.
#[derive(Clone, Debug)]
pub struct WPoint {
    pub re: BigInt,
    pub im: BigInt,
    pub exp5: u32,
    pub weight: BigRational,
}

fn pow5(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(5), e as usize)
}

fn common(points: &[WPoint]) -> (u32, Vec<(BigInt, BigInt)>) {
    let e = points.iter().map(|p| p.exp5).max().unwrap_or(0);
    let nums = points
        .iter()
        .map(|p| {
            let f = pow5(e - p.exp5);
            (&p.re * &f, &p.im * &f)
        })
        .collect();
    (e, nums)
}

/// Squared distance `m / 5^l` with `l = 0` or `5 ∤ m`.
pub fn reduce(n: &BigUint, mut l: u32) -> (BigUint, u32) {
    let five = BigUint::from(5u32);
    let mut m = n.clone();
    while l > 0 && (&m % &five).is_zero() {
        m /= &five;
        l -= 1;
    }
    (m, l)
}

/// Pair-correlation coefficients by enumerating every ordered pair.
///
/// Returns `η(0)` and the map `(m, l) ↦ η` for `0 < m/5^l ≤ rmax²`, both
/// divided by the number of references, dropping zero sums.
pub fn pair_coefficients(
    points: &[WPoint],
    references: &[bool],
    rmax: f64,
) -> (BigRational, BTreeMap<(BigUint, u32), BigRational>) {
    let (e, nums) = common(points);
    let den = pow5(2 * e);
    let r = BigRational::from_float(rmax).unwrap();
    let bound = r.clone() * r * BigRational::from_integer(den);
    let n_ref = references.iter().filter(|&&b| b).count();
    let mut eta0 = BigRational::zero();
    let mut raw: BTreeMap<(BigUint, u32), BigRational> = BTreeMap::new();
    for (i, x) in points.iter().enumerate() {
        if !references[i] {
            continue;
        }
        eta0 += &x.weight * &x.weight;
        for (j, y) in points.iter().enumerate() {
            let dx = &nums[i].0 - &nums[j].0;
            let dy = &nums[i].1 - &nums[j].1;
            let n = &dx * &dx + &dy * &dy;
            if n.is_zero() || BigRational::from_integer(n.clone()) > bound {
                continue;
            }
            let key = reduce(&n.to_biguint().unwrap(), 2 * e);
            *raw.entry(key).or_insert_with(BigRational::zero) += &x.weight * &y.weight;
        }
    }
    let nr = BigRational::from_integer(BigInt::from(n_ref));
    let coeffs = raw
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k, v / &nr))
        .collect();
    (eta0 / nr, coeffs)
}

/// Every squared pair distance of the points, reduced.
pub fn all_squared_distances(points: &[WPoint]) -> Vec<(BigUint, u32)> {
    let (e, nums) = common(points);
    let mut out = Vec::new();
    for i in 0..nums.len() {
        for j in i + 1..nums.len() {
            let dx = &nums[i].0 - &nums[j].0;
            let dy = &nums[i].1 - &nums[j].1;
            let n = (&dx * &dx + &dy * &dy).to_biguint().unwrap();
            out.push(reduce(&n, 2 * e));
        }
    }
    out
}

fn cross(o: &(BigInt, BigInt), a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> BigInt {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Exact convex hull of integer points, counter-clockwise.
pub fn integer_hull(points: &[(BigInt, BigInt)]) -> Vec<(BigInt, BigInt)> {
    // gift wrapping from the lowest-leftmost point
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let start = pts.iter().min_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0))).unwrap().clone();
    let mut hull = vec![start.clone()];
    let mut cur = start.clone();
    loop {
        let mut next = if pts[0] == cur { pts[1].clone() } else { pts[0].clone() };
        for p in &pts {
            if *p == cur {
                continue;
            }
            let c = cross(&cur, &next, p);
            let farther = || {
                let d = |q: &(BigInt, BigInt)| (&q.0 - &cur.0).pow(2) + (&q.1 - &cur.1).pow(2);
                d(p) > d(&next)
            };
            if c.is_negative() || (c.is_zero() && farther()) {
                next = p.clone();
            }
        }
        if next == start {
            break;
        }
        hull.push(next.clone());
        cur = next;
    }
    hull
}

/// Squared distance from `p` to the boundary of a counter-clockwise hull,
/// exactly.
pub fn squared_boundary_distance(hull: &[(BigInt, BigInt)], p: &(BigInt, BigInt)) -> BigRational {
    let n = hull.len();
    let mut best: Option<BigRational> = None;
    for i in 0..n {
        let a = &hull[i];
        let b = &hull[(i + 1) % n];
        let (dx, dy) = (&b.0 - &a.0, &b.1 - &a.1);
        let (px, py) = (&p.0 - &a.0, &p.1 - &a.1);
        let len2 = &dx * &dx + &dy * &dy;
        let dot = &px * &dx + &py * &dy;
        let d2 = if len2.is_zero() || !dot.is_positive() {
            BigRational::from_integer(&px * &px + &py * &py)
        } else if dot >= len2 {
            let (qx, qy) = (&p.0 - &b.0, &p.1 - &b.1);
            BigRational::from_integer(&qx * &qx + &qy * &qy)
        } else {
            let c = &px * &dy - &py * &dx;
            BigRational::new(&c * &c, len2)
        };
        best = Some(match best {
            Some(b) if b <= d2 => b,
            _ => d2,
        });
    }
    best.unwrap_or_else(BigRational::zero)
}

/// Points farther than `cut` from the boundary of the convex hull.
pub fn eroded_references(points: &[WPoint], cut: f64) -> Vec<bool> {
    let (e, nums) = common(points);
    let hull = integer_hull(&nums);
    let c = BigRational::from_float(cut).unwrap() * BigRational::from_integer(pow5(e));
    let c2 = &c * &c;
    nums.iter().map(|p| squared_boundary_distance(&hull, p) > c2).collect()
}

/// Composite Simpson rule with `2n` panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let m = 2 * n;
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_values() {
        assert_eq!(j0_series(0.0), 1.0);
        assert!((j0_series(1.0) - 0.765_197_686_557_966_6).abs() < 1e-16);
        assert!((j0_series(100.0) - 0.019_985_850_304_223_122).abs() < 1e-16);
        assert!((j0_root(2.0, 3.0) - 2.404_825_557_695_773).abs() < 1e-15);
    }

    #[test]
    fn r2_small() {
        assert_eq!(r2_brute(0), 1);
        assert_eq!(r2_brute(1), 4);
        assert_eq!(r2_brute(3), 0);
        assert_eq!(r2_brute(25), 12);
        let t = r2_table(500);
        assert!((0..=500).all(|m| t[m as usize] == r2_brute(m)));
    }

    #[test]
    fn hull_and_distance() {
        let p = |x: i64, y: i64| (BigInt::from(x), BigInt::from(y));
        let pts = vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4), p(2, 2), p(2, 0)];
        let h = integer_hull(&pts);
        assert_eq!(h, vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)]);
        assert_eq!(squared_boundary_distance(&h, &p(2, 2)), BigRational::from_integer(4.into()));
        assert_eq!(squared_boundary_distance(&h, &p(1, 2)), BigRational::from_integer(1.into()));
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x| x * x * x - x, 0.0, 2.0, 3);
        assert!((v - 2.0).abs() < 1e-14);
    }
}
