use std::f64::consts::TAU;

use rayon::prelude::*;

use super::bessel::{j0, MAX_ARGUMENT};
use crate::correlation::RadialAutocorrelation;
use crate::error::{Error, Result};

/// Radial diffraction intensity sampled on a uniform grid of wave numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct IntensityProfile {
    pub kgrid: Vec<f64>,
    pub values: Vec<f64>,
    pub provenance: String,
}

/// `k_j = j·dk` for `j = 0, 1, …` while `k_j ≤ kmax`.
pub fn uniform_grid(kmax: f64, dk: f64) -> Result<Vec<f64>> {
    if !(dk.is_finite() && dk > 0.0) {
        return Err(Error::Input(format!("dk must be positive, got {dk}")));
    }
    if !(kmax.is_finite() && kmax >= dk) {
        return Err(Error::Input(format!("kmax must be at least dk, got kmax = {kmax}")));
    }
    // tolerate kmax/dk landing a hair below an integer
    let n = (kmax / dk * (1.0 + 1e-12)).floor() as usize;
    Ok((0..=n).map(|j| j as f64 * dk).collect())
}

/// `I(k) = η(0) + Σ_r η(r)·J₀(2π k r)`, each grid point summed in ascending
/// r.
pub fn intensity_profile(ac: &RadialAutocorrelation, kmax: f64, dk: f64) -> Result<IntensityProfile> {
    let kgrid = uniform_grid(kmax, dk)?;
    let terms = ac.terms_f64();
    let rmax = terms.last().map_or(0.0, |t| t.0);
    if TAU * kmax * rmax > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "2π·kmax·rmax = {} exceeds the Bessel evaluator range",
            TAU * kmax * rmax
        )));
    }
    let values = kgrid
        .par_iter()
        .map(|&k| {
            let w = TAU * k;
            terms.iter().map(|&(r, eta)| eta * j0(w * r)).sum()
        })
        .collect();
    Ok(IntensityProfile {
        kgrid,
        values,
        provenance: format!("n_ref={} rmax={} terms={}", ac.n_ref, ac.rmax, terms.len()),
    })
}

impl IntensityProfile {
    pub fn new(kgrid: Vec<f64>, values: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        if kgrid.len() != values.len() {
            return Err(Error::Input("kgrid and values differ in length".into()));
        }
        if kgrid.is_empty() || kgrid.windows(2).any(|w| w[0] >= w[1]) || kgrid[0] < 0.0 {
            return Err(Error::Input("kgrid must be nonempty, nonnegative and increasing".into()));
        }
        Ok(IntensityProfile {
            kgrid,
            values,
            provenance: provenance.into(),
        })
    }

    pub fn kmax(&self) -> f64 {
        *self.kgrid.last().unwrap_or(&0.0)
    }

    /// Smallest grid spacing.
    pub fn spacing(&self) -> f64 {
        self.kgrid.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    /// Linear interpolation between grid points.
    pub fn value_at(&self, k: f64) -> Option<f64> {
        let g = &self.kgrid;
        if k < g[0] || k > *g.last()? {
            return None;
        }
        let i = g.partition_point(|&x| x <= k).saturating_sub(1).min(g.len().saturating_sub(2));
        if g.len() == 1 {
            return Some(self.values[0]);
        }
        let t = (k - g[i]) / (g[i + 1] - g[i]);
        Some(self.values[i] + t * (self.values[i + 1] - self.values[i]))
    }

    /// Trapezoid integral of the piecewise-linear interpolant over `[a, b]`.
    fn integral(&self, a: f64, b: f64) -> f64 {
        let g = &self.kgrid;
        let start = g.partition_point(|&x| x <= a).saturating_sub(1);
        let mut sum = 0.0;
        for i in start..g.len().saturating_sub(1) {
            if g[i] >= b {
                break;
            }
            let lo = a.max(g[i]);
            let hi = b.min(g[i + 1]);
            if hi > lo {
                let f = |x: f64| {
                    let t = (x - g[i]) / (g[i + 1] - g[i]);
                    self.values[i] + t * (self.values[i + 1] - self.values[i])
                };
                sum += 0.5 * (hi - lo) * (f(lo) + f(hi));
            }
        }
        sum
    }
}

/// Integrated intensity over `[k0 − delta, k0 + delta]`.
///
/// The radial profile is even in k, so a window reaching below zero is
/// folded back onto `[0, …]`; this is how the intensity "at k = 0" is
/// measured.
pub fn ring_intensity(profile: &IntensityProfile, k0: f64, delta: f64) -> Result<f64> {
    if !(k0.is_finite() && k0 >= 0.0) {
        return Err(Error::Input(format!("ring centre must be nonnegative, got {k0}")));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Input(format!("ring half-width must be positive, got {delta}")));
    }
    if delta < profile.spacing() * (1.0 - 1e-9) {
        return Err(Error::Input(format!(
            "ring half-width {delta} is below the grid spacing {}",
            profile.spacing()
        )));
    }
    let (lo, hi) = (k0 - delta, k0 + delta);
    let g0 = profile.kgrid[0];
    let kmax = profile.kmax();
    // allow the window edge to miss the last grid point by rounding only
    let slack = 1e-9 * profile.spacing();
    if hi > kmax + slack || (lo < g0 - slack && (g0 != 0.0 || -lo > kmax)) {
        return Err(Error::Range(format!(
            "window [{lo}, {hi}] is outside the sampled range [{g0}, {kmax}]"
        )));
    }
    let hi = hi.min(kmax);
    if lo >= g0 - slack {
        Ok(profile.integral(lo.max(g0), hi))
    } else {
        Ok(profile.integral(0.0, -lo) + profile.integral(0.0, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::SqDist;
    use num_rational::BigRational;
    use std::collections::BTreeMap;

    fn toy() -> RadialAutocorrelation {
        let mut c = BTreeMap::new();
        c.insert(SqDist::new(1u32, 0).unwrap(), BigRational::new(8.into(), 5.into()));
        RadialAutocorrelation::new(BigRational::from_integer(1.into()), c, 5, 1.0)
    }

    fn constant(c: f64) -> IntensityProfile {
        let k = uniform_grid(4.0, 0.001).unwrap();
        let v = vec![c; k.len()];
        IntensityProfile::new(k, v, "constant").unwrap()
    }

    #[test]
    fn grid_endpoints() {
        let g = uniform_grid(4.0, 0.001).unwrap();
        assert_eq!(g.len(), 4001);
        assert_eq!(g[0], 0.0);
        assert!((g[4000] - 4.0).abs() < 1e-12);
        assert_eq!(uniform_grid(1.0, 0.3).unwrap().len(), 4);
        assert!(uniform_grid(0.1, 0.3).is_err());
        assert!(uniform_grid(1.0, 0.0).is_err());
    }

    #[test]
    fn single_scatterer_is_flat() {
        let ac = RadialAutocorrelation::new(BigRational::from_integer(1.into()), BTreeMap::new(), 1, 1.0);
        let p = intensity_profile(&ac, 4.0, 0.01).unwrap();
        assert!(p.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn toy_profile_values() {
        let p = intensity_profile(&toy(), 1.0, 0.001).unwrap();
        assert!((p.values[0] - 2.6).abs() < 1e-15);
        let kz = 2.404_825_557_695_773 / TAU;
        let single = intensity_profile(&toy(), kz, kz).unwrap();
        assert!((single.values[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn constant_ring_integrals() {
        let p = constant(1.0);
        assert!((ring_intensity(&p, 1.0, 0.01).unwrap() - 0.02).abs() < 1e-14);
        let p = constant(3.5);
        assert!((ring_intensity(&p, 2.2345, 0.0137).unwrap() - 2.0 * 3.5 * 0.0137).abs() < 1e-13);
        // folded window at the origin
        assert!((ring_intensity(&p, 0.0, 0.01).unwrap() - 3.5 * 0.02).abs() < 1e-13);
        assert!((ring_intensity(&p, 0.004, 0.01).unwrap() - 3.5 * 0.02).abs() < 1e-13);
    }

    #[test]
    fn ring_window_checks() {
        let p = constant(1.0);
        assert!(matches!(ring_intensity(&p, 3.995, 0.01), Err(Error::Range(_))));
        assert!(ring_intensity(&p, 3.99, 0.01).is_ok());
        assert!(ring_intensity(&p, 1.0, 0.0001).is_err());
        assert!(ring_intensity(&p, -1.0, 0.01).is_err());
    }

    #[test]
    fn interpolation() {
        let k = vec![0.0, 1.0, 2.0];
        let p = IntensityProfile::new(k, vec![0.0, 2.0, 0.0], "tent").unwrap();
        assert_eq!(p.value_at(0.5), Some(1.0));
        assert_eq!(p.value_at(2.0), Some(0.0));
        assert_eq!(p.value_at(2.5), None);
        assert!((ring_intensity(&p, 1.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        // interpolated endpoints at 0.5 and 1.5
        let k = vec![0.0, 0.5, 1.0, 1.5, 2.0];
        let p = IntensityProfile::new(k, vec![0.0, 1.0, 2.0, 1.0, 0.0], "tent").unwrap();
        assert!((ring_intensity(&p, 1.0, 0.5).unwrap() - 1.5).abs() < 1e-15);
        assert!((ring_intensity(&p, 0.75, 0.5).unwrap() - 1.375).abs() < 1e-15);
    }

    #[test]
    fn profile_rejects_mismatched_lengths() {
        assert!(IntensityProfile::new(vec![0.0, 1.0], vec![1.0], "").is_err());
        assert!(IntensityProfile::new(vec![1.0, 0.5], vec![1.0, 1.0], "").is_err());
    }
}
