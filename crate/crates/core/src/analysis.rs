//! Ring intensity systematics: classification of `k²`, the `2^s` collapse
//! and `c/k` decay fits.

use std::collections::BTreeMap;

use crate::arith::{factorize, r2};
use crate::diffraction::{ring_intensity, IntensityProfile};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PeakRecord {
    pub m: u64,
    pub ell: u32,
    pub s: u32,
    pub k: f64,
    pub ratio: f64,
    pub collapsed: f64,
}

/// `(ell, s)`: the exponent of 5 in `m` and the number of prime factors
/// `p ≡ 1 (mod 4)`, `p ≠ 5`, counted with multiplicity.
pub fn classify_k(m: u64) -> (u32, u32) {
    let mut ell = 0;
    let mut s = 0;
    for (p, e) in factorize(m) {
        if p == 5 {
            ell = e;
        } else if p % 4 == 1 {
            s += e;
        }
    }
    (ell, s)
}

pub fn collapse_ratios(records: &[PeakRecord]) -> Vec<PeakRecord> {
    records
        .iter()
        .map(|r| PeakRecord {
            collapsed: r.ratio / 2f64.powi(r.s as i32),
            ..r.clone()
        })
        .collect()
}

/// Least squares fit of `y ≈ c/k`; returns `c` and the rms residual relative
/// to the mean of `|y|`.
pub fn fit_inverse_k(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::Input(format!("fit needs at least 2 points, got {}", points.len())));
    }
    if let Some(&(k, _)) = points.iter().find(|p| !(p.0 > 0.0 && p.0.is_finite())) {
        return Err(Error::Input(format!("fit needs positive k, got {k}")));
    }
    let sxy: f64 = points.iter().map(|&(k, y)| y / k).sum();
    let sxx: f64 = points.iter().map(|&(k, _)| 1.0 / (k * k)).sum();
    let c = sxy / sxx;
    let n = points.len() as f64;
    let rms = (points.iter().map(|&(k, y)| (y - c / k).powi(2)).sum::<f64>() / n).sqrt();
    let scale = points.iter().map(|p| p.1.abs()).sum::<f64>() / n;
    let rel = if scale == 0.0 { 0.0 } else { rms / scale };
    Ok((c, rel))
}

/// Integrated rings at `k = √m` for every `m ≤ mmax` with `r2(m) > 0`,
/// as ratios to the ring at `k = 1`, sorted by k.
pub fn peak_table(profile: &IntensityProfile, mmax: u64, delta: f64) -> Result<Vec<PeakRecord>> {
    if mmax == 0 {
        return Err(Error::Input("mmax must be at least 1".into()));
    }
    let kmax = (mmax as f64).sqrt();
    if kmax + delta > profile.kmax() + 1e-9 * profile.spacing() {
        return Err(Error::Range(format!(
            "profile ends at k = {} but rings up to {kmax} with half-width {delta} are needed",
            profile.kmax()
        )));
    }
    let base = ring_intensity(profile, 1.0, delta)?;
    let mut out = Vec::new();
    for m in (1..=mmax).filter(|&m| r2(m) > 0) {
        let k = (m as f64).sqrt();
        let (ell, s) = classify_k(m);
        let ratio = ring_intensity(profile, k, delta)? / base;
        out.push(PeakRecord {
            m,
            ell,
            s,
            k,
            ratio,
            collapsed: ratio / 2f64.powi(s as i32),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupFit {
    pub ell: u32,
    pub s: u32,
    pub c: f64,
    pub rel_rms_residual: f64,
    pub points: usize,
}

/// Fits `ratio ≈ c/k` separately for every `(ell, s)` group holding at least
/// two records.
pub fn group_fits(records: &[PeakRecord]) -> Vec<GroupFit> {
    let mut groups: BTreeMap<(u32, u32), Vec<(f64, f64)>> = BTreeMap::new();
    for r in records {
        groups.entry((r.ell, r.s)).or_default().push((r.k, r.ratio));
    }
    groups
        .into_iter()
        .filter_map(|((ell, s), pts)| {
            let (c, rel) = fit_inverse_k(&pts).ok()?;
            Some(GroupFit {
                ell,
                s,
                c,
                rel_rms_residual: rel,
                points: pts.len(),
            })
        })
        .collect()
}
