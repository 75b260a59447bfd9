//! Circularly averaged autocorrelation of a weighted control-point comb.
//!
//! Every pair difference is an exact Gaussian integer over a common power of
//! five, so pairs are binned by their exact squared distance. Coefficients
//! are exact rationals normalized per reference point.

mod grid;
mod hull;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::arith::{pow5, SqDist};
use crate::error::{Error, Result};
use crate::tiling::{Chirality, Patch};
use grid::CellGrid;

/// Scattering strengths of the two chiralities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    pub plus: BigRational,
    pub minus: BigRational,
}

impl Weights {
    pub fn new(plus: BigRational, minus: BigRational) -> Self {
        Weights { plus, minus }
    }

    pub fn ints(plus: i64, minus: i64) -> Self {
        Weights::new(BigRational::from_integer(plus.into()), BigRational::from_integer(minus.into()))
    }

    pub fn of(&self, chi: Chirality) -> &BigRational {
        match chi {
            Chirality::Plus => &self.plus,
            Chirality::Minus => &self.minus,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }

    /// Integer numerators over a shared denominator.
    fn common_denominator(&self) -> Result<(i64, i64, i64)> {
        let den = self.plus.denom().lcm(self.minus.denom());
        let scale = |w: &BigRational| (w.numer() * (&den / w.denom())).to_i64();
        match (scale(&self.plus), scale(&self.minus), den.to_i64()) {
            (Some(p), Some(m), Some(d)) if p.unsigned_abs() < 1 << 31 && m.unsigned_abs() < 1 << 31 => Ok((p, m, d)),
            _ => Err(Error::Input("weights too large for exact pair accumulation".into())),
        }
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.plus, self.minus)
    }
}

impl FromStr for Weights {
    type Err = Error;
    /// Parses `a,b` where each part is an integer or a fraction `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("weights must look like 'a,b', got '{s}'"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let parse = |t: &str| crate::io::parse_ratio(t).ok_or_else(bad);
        Ok(Weights::new(parse(a)?, parse(b)?))
    }
}

/// Which points serve as centres of the pair count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Estimator {
    /// Every point of the patch.
    AllPairs,
    /// Only points farther than `rmax` from the boundary of the convex hull,
    /// so that every reference sees a complete disc of neighbours.
    #[default]
    ErodedCore,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::AllPairs => "all-pairs",
            Estimator::ErodedCore => "eroded-core",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-pairs" => Ok(Estimator::AllPairs),
            "eroded-core" => Ok(Estimator::ErodedCore),
            _ => Err(Error::Input(format!(
                "unknown estimator '{s}' (expected all-pairs or eroded-core)"
            ))),
        }
    }
}

/// Points whose distance to the hull boundary is within this margin of
/// `rmax` are not used as references.
pub const EROSION_MARGIN: f64 = 1e-6;

/// `η(0)` together with `η(r)` for the distances `0 < r ≤ rmax` that occur.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialAutocorrelation {
    pub eta0: BigRational,
    pub coeffs: BTreeMap<SqDist, BigRational>,
    pub n_ref: usize,
    pub rmax: f64,
}

impl RadialAutocorrelation {
    pub fn new(eta0: BigRational, coeffs: BTreeMap<SqDist, BigRational>, n_ref: usize, rmax: f64) -> Self {
        RadialAutocorrelation {
            eta0,
            coeffs,
            n_ref,
            rmax,
        }
    }

    /// `η(0) + Σ_r η(r)`, the total weight of the measure.
    pub fn total(&self) -> BigRational {
        self.coeffs.values().fold(self.eta0.clone(), |acc, c| acc + c)
    }

    /// `(r, η(r))` pairs in floating point, `r = 0` first, ascending in r.
    pub fn terms_f64(&self) -> Vec<(f64, f64)> {
        std::iter::once((0.0, ratio_to_f64(&self.eta0)))
            .chain(self.coeffs.iter().map(|(d, c)| (d.r(), ratio_to_f64(c))))
            .collect()
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Control points of a patch as integer numerators over `5^exp5`.
struct ExactPoints {
    exp5: u32,
    nums: Vec<(i64, i64)>,
    shadows: Vec<(f64, f64)>,
    weights: Vec<i64>,
}

const COORD_LIMIT: u64 = 1 << 62;

impl ExactPoints {
    fn new(patch: &Patch, wplus: i64, wminus: i64) -> Result<Self> {
        let exp5 = patch.tiles().iter().map(|t| t.point.exp5()).max().unwrap_or(0);
        let scale = 5f64.powi(exp5 as i32);
        let mut nums = Vec::with_capacity(patch.len());
        let mut shadows = Vec::with_capacity(patch.len());
        let mut weights = Vec::with_capacity(patch.len());
        for t in patch.tiles() {
            let n = t.point.numerator_at(exp5);
            let (a, b) = match (n.re.to_i64(), n.im.to_i64()) {
                (Some(a), Some(b)) if a.unsigned_abs() < COORD_LIMIT && b.unsigned_abs() < COORD_LIMIT => (a, b),
                _ => return Err(Error::Size("control-point numerators exceed 62 bits".into())),
            };
            nums.push((a, b));
            shadows.push((a as f64 / scale, b as f64 / scale));
            weights.push(match t.chi {
                Chirality::Plus => wplus,
                Chirality::Minus => wminus,
            });
        }
        Ok(ExactPoints {
            exp5,
            nums,
            shadows,
            weights,
        })
    }
}

/// Reference points for the given estimator, ascending.
fn reference_points(pts: &ExactPoints, rmax: f64, estimator: Estimator) -> Result<Vec<usize>> {
    let refs: Vec<usize> = match estimator {
        Estimator::AllPairs => (0..pts.nums.len()).collect(),
        Estimator::ErodedCore => {
            let hull = hull::convex_hull(&pts.shadows);
            let cut = rmax + EROSION_MARGIN;
            (0..pts.nums.len())
                .filter(|&i| hull::boundary_distance(&hull, pts.shadows[i]) > cut)
                .collect()
        }
    };
    if refs.is_empty() {
        return Err(Error::Estimator(match estimator {
            Estimator::AllPairs => "patch is empty".into(),
            Estimator::ErodedCore => format!("no control point lies farther than rmax = {rmax} from the patch boundary"),
        }));
    }
    Ok(refs)
}

/// `floor(rmax² · 25^exp5)`: the largest admissible squared-distance numerator.
fn numerator_threshold(rmax: f64, exp5: u32) -> Result<u128> {
    let r = BigRational::from_float(rmax).ok_or_else(|| Error::Input("rmax must be finite".into()))?;
    let den = pow5(2 * exp5);
    let t = (&r * &r * BigRational::from_integer(den)).floor().to_integer();
    t.to_u128()
        .filter(|&t| t < 1u128 << 126)
        .ok_or_else(|| Error::Size("rmax too large for exact pair accumulation".into()))
}

type PairSums = FxHashMap<u128, i128>;

fn accumulate(pts: &ExactPoints, grid: &CellGrid, refs: &[usize], threshold: u128) -> PairSums {
    let mut sums = PairSums::default();
    for &i in refs {
        let wi = pts.weights[i];
        if wi == 0 {
            continue;
        }
        let (a, b) = pts.nums[i];
        grid.for_each_near(pts.shadows[i], |ids| {
            for &j in ids {
                let j = j as usize;
                let wj = pts.weights[j];
                if wj == 0 {
                    continue;
                }
                let (c, d) = pts.nums[j];
                let (da, db) = ((a - c) as i128, (b - d) as i128);
                let n = (da * da + db * db) as u128;
                if n == 0 || n > threshold {
                    continue;
                }
                *sums.entry(n).or_insert(0) += (wi * wj) as i128;
            }
        });
    }
    sums
}

/// Estimates `η` for the weighted comb `α₊δ_{Λ₊} + α₋δ_{Λ₋}` restricted to
/// the patch, counting ordered pairs `(x, y)` with `x` a reference point and
/// `0 < |x − y| ≤ rmax`, and dividing by the number of references.
///
/// Distances whose pair sum cancels exactly are omitted from `coeffs`.
pub fn estimate_autocorr(
    patch: &Patch,
    weights: &Weights,
    rmax: f64,
    estimator: Estimator,
) -> Result<RadialAutocorrelation> {
    if !(rmax.is_finite() && rmax > 0.0) {
        return Err(Error::Input(format!("rmax must be a positive number, got {rmax}")));
    }
    let (wplus, wminus, den) = weights.common_denominator()?;
    let pts = ExactPoints::new(patch, wplus, wminus)?;
    let refs = reference_points(&pts, rmax, estimator)?;
    let threshold = numerator_threshold(rmax, pts.exp5)?;

    let grid = CellGrid::new(&pts.shadows, rmax);
    let sums = refs
        .par_chunks(512)
        .fold(PairSums::default, |mut acc, chunk| {
            let part = accumulate(&pts, &grid, chunk, threshold);
            merge(&mut acc, part);
            acc
        })
        .reduce(PairSums::default, |mut a, b| {
            merge(&mut a, b);
            a
        });

    let n_ref = refs.len();
    let norm = BigInt::from(den) * BigInt::from(den) * BigInt::from(n_ref);
    let self_sum: i128 = refs.iter().map(|&i| (pts.weights[i] as i128).pow(2)).sum();
    let eta0 = BigRational::new(BigInt::from(self_sum), norm.clone());

    let mut keyed: Vec<(u128, i128)> = sums.into_iter().filter(|&(_, s)| s != 0).collect();
    // one denominator for every key, so numerator order is distance order
    keyed.sort_unstable_by_key(|&(n, _)| n);
    let coeffs = keyed
        .into_iter()
        .map(|(n, s)| {
            let d = SqDist::new(BigUint::from(n), 2 * pts.exp5).expect("nonzero distance");
            (d, BigRational::new(BigInt::from(s), norm.clone()))
        })
        .collect();
    Ok(RadialAutocorrelation::new(eta0, coeffs, n_ref, rmax))
}

fn merge(into: &mut PairSums, from: PairSums) {
    if into.len() < from.len() {
        let small = std::mem::replace(into, from);
        merge(into, small);
        return;
    }
    for (k, v) in from {
        *into.entry(k).or_insert(0) += v;
    }
}

/// Whether every coefficient of `ac` is an integer multiple of `1/n_ref`.
pub fn has_integral_counts(ac: &RadialAutocorrelation) -> bool {
    let n = BigInt::from(ac.n_ref);
    std::iter::once(&ac.eta0)
        .chain(ac.coeffs.values())
        .all(|c| (c * BigRational::from_integer(n.clone())).is_integer())
}

/// `Σ_r η(r)` over the shells with `r > 0`.
pub fn shell_sum(ac: &RadialAutocorrelation) -> BigRational {
    ac.coeffs.values().fold(BigRational::zero(), |a, c| a + c)
}

/// All coefficients nonnegative (holds for nonnegative weights).
pub fn is_nonnegative(ac: &RadialAutocorrelation) -> bool {
    !ac.eta0.is_negative() && ac.coeffs.values().all(|c| !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{inflate, Seed};
    use num_traits::One;

    fn one() -> BigRational {
        BigRational::one()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sd(m: u64, l: u32) -> SqDist {
        SqDist::new(m, l).unwrap()
    }

    #[test]
    fn weights_parse() {
        assert_eq!("1,-1".parse::<Weights>().unwrap(), Weights::ints(1, -1));
        assert_eq!(" 0 , 1 ".parse::<Weights>().unwrap(), Weights::ints(0, 1));
        assert_eq!("1/2,1".parse::<Weights>().unwrap().plus, q(1, 2));
        assert_eq!(Weights::ints(1, -1).to_string().parse::<Weights>().unwrap(), Weights::ints(1, -1));
        assert!("1".parse::<Weights>().is_err());
        assert!("a,1".parse::<Weights>().is_err());
    }

    #[test]
    fn five_point_patch_unit_shell() {
        let p = inflate(Seed::Single, 1).unwrap();
        let ac = estimate_autocorr(&p, &Weights::ints(1, 1), 1.0, Estimator::AllPairs).unwrap();
        assert_eq!(ac.eta0, one());
        assert_eq!(ac.n_ref, 5);
        assert_eq!(ac.coeffs.len(), 1);
        assert_eq!(ac.coeffs[&sd(1, 0)], q(8, 5));
    }

    #[test]
    fn five_point_patch_diagonal_shell() {
        let p = inflate(Seed::Single, 1).unwrap();
        let ac = estimate_autocorr(&p, &Weights::ints(1, 1), 1.5, Estimator::AllPairs).unwrap();
        assert_eq!(ac.coeffs.len(), 2);
        assert_eq!(ac.coeffs[&sd(1, 0)], q(8, 5));
        assert_eq!(ac.coeffs[&sd(2, 0)], q(4, 5));
    }

    #[test]
    fn zero_weights_give_empty_measure() {
        let p = inflate(Seed::Single, 2).unwrap();
        let ac = estimate_autocorr(&p, &Weights::ints(0, 0), 3.0, Estimator::AllPairs).unwrap();
        assert!(ac.eta0.is_zero());
        assert!(ac.coeffs.is_empty());
    }

    #[test]
    fn rational_weights_scale_quadratically() {
        let p = inflate(Seed::Single, 3).unwrap();
        let w1 = Weights::ints(1, -1);
        let half = Weights::new(q(1, 2), q(-1, 2));
        let a = estimate_autocorr(&p, &w1, 4.0, Estimator::AllPairs).unwrap();
        let b = estimate_autocorr(&p, &half, 4.0, Estimator::AllPairs).unwrap();
        assert_eq!(b.eta0, &a.eta0 * q(1, 4));
        for (k, v) in &a.coeffs {
            assert_eq!(b.coeffs[k], v * q(1, 4));
        }
    }

    #[test]
    fn threshold_is_inclusive() {
        // rmax exactly 1 keeps the unit shell; just below drops it
        let p = inflate(Seed::Single, 1).unwrap();
        let ac = estimate_autocorr(&p, &Weights::ints(1, 1), 0.999_999, Estimator::AllPairs).unwrap();
        assert!(ac.coeffs.is_empty());
    }

    #[test]
    fn eroded_core_needs_interior_points() {
        let p = inflate(Seed::Single, 2).unwrap();
        let err = estimate_autocorr(&p, &Weights::ints(1, 1), 50.0, Estimator::ErodedCore).unwrap_err();
        assert!(matches!(err, Error::Estimator(_)));
        let p = inflate(Seed::Single, 4).unwrap();
        let ac = estimate_autocorr(&p, &Weights::ints(1, 1), 2.0, Estimator::ErodedCore).unwrap();
        assert!(ac.n_ref > 0 && ac.n_ref < p.len());
        assert_eq!(ac.eta0, one());
    }

    #[test]
    fn bad_rmax_rejected() {
        let p = inflate(Seed::Single, 1).unwrap();
        for r in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(estimate_autocorr(&p, &Weights::ints(1, 1), r, Estimator::AllPairs).is_err());
        }
    }

    #[test]
    fn estimator_names() {
        for e in [Estimator::AllPairs, Estimator::ErodedCore] {
            assert_eq!(e.name().parse::<Estimator>().unwrap(), e);
        }
        assert!("core".parse::<Estimator>().is_err());
    }
}
