//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p pinwheel-cli --test acceptance`.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::SQRT_2;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Signed;
use pinwheel::analysis::{group_fits, peak_table, GroupFit, PeakRecord};
use pinwheel::arith::{inflation_multiplier, point, r2, reduce_sqdist, AngleIndex, SqDist};
use pinwheel::correlation::{estimate_autocorr, Estimator, Weights};
use pinwheel::diffraction::{bessel_j0, intensity_profile, powder_reference, ring_intensity, IntensityProfile};
use pinwheel::tiling::{
    census_count, census_matrix, census_recursion, doubled_area, inflate, triangle_contains, Chirality, Patch, Seed,
    Tile,
};
use pinwheel_oracles::{j0_root, j0_series, r2_table};
use rand::{Rng, SeedableRng};

const MAIN_RINGS: [f64; 4] = [1.0, SQRT_2, 2.0, 2.236_067_977_499_79];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

/// Profile of the unit-weight comb shared by criteria 6 and 7.
struct Shared {
    unit: Option<IntensityProfile>,
}

impl Shared {
    fn unit_profile(&mut self) -> &IntensityProfile {
        self.unit.get_or_insert_with(|| {
            let patch = inflate(Seed::Single, 7).unwrap();
            let ac = estimate_autocorr(&patch, &Weights::ints(1, 1), 30.0, Estimator::ErodedCore).unwrap();
            intensity_profile(&ac, 20.02, 0.001).unwrap()
        })
    }
}

fn census_agreement() -> Verdict {
    let start = Instant::now();
    for (seed, counts) in [(Seed::Single, (1u64, 0u64)), (Seed::CensusPair, (1, 1))] {
        let mut patch = Patch::from_seed(seed);
        for n in 0..=6u32 {
            if n > 0 {
                patch = patch.inflate(1).unwrap();
            }
            let direct = census_count(&patch).unwrap();
            let rec = census_recursion(n, counts);
            let mat = census_matrix(n, counts);
            if direct != rec || rec != mat {
                return verdict(false, format!("{} seed disagrees at n = {n}", seed.name()));
            }
            let want = (counts.0 + counts.1) * 5u64.pow(n);
            if mat.total() != want.into() {
                return verdict(false, format!("total at n = {n} is {}, expected {want}", mat.total()));
            }
        }
    }
    let t = start.elapsed().as_secs_f64();
    verdict(t < 60.0, format!("n = 0..6, both seeds, {t:.1} s (limit 60 s)"))
}

fn census_identities() -> Verdict {
    let start = Instant::now();
    for n in 1..=40u32 {
        let c = census_matrix(n, (1, 1));
        if !c.is_mirror_symmetric() {
            return verdict(false, format!("symmetry fails at n = {n}"));
        }
        if !c.interleaving_holds() {
            return verdict(false, format!("inequality chain fails at n = {n}"));
        }
        if !c.totals_increase_to_middle() {
            return verdict(false, format!("f_n(k) > f_n(k-1) fails at n = {n}"));
        }
    }
    let t = start.elapsed().as_secs_f64();
    verdict(t < 5.0, format!("n = 1..40, {t:.2} s (limit 5 s)"))
}

fn distance_set() -> Verdict {
    let start = Instant::now();
    let patch = inflate(Seed::Single, 5).unwrap();
    let e = patch.tiles().iter().map(|t| t.point.exp5()).max().unwrap();
    let nums: Vec<_> = patch.tiles().iter().map(|t| t.point.numerator_at(e)).collect();
    let mut distinct: HashSet<SqDist> = HashSet::new();
    let mut pairs = 0u64;
    for i in 0..nums.len() {
        for j in i + 1..nums.len() {
            distinct.insert(reduce_sqdist(&(&nums[i] - &nums[j]), e).unwrap());
            pairs += 1;
        }
    }
    let mut bad = 0;
    for d in &distinct {
        let m: u64 = match d.m().try_into() {
            Ok(m) => m,
            Err(_) => {
                bad += 1;
                continue;
            }
        };
        let reduced = d.l() == 0 || !m.is_multiple_of(5);
        if !reduced || r2(m) == 0 {
            bad += 1;
        }
    }
    let t = start.elapsed().as_secs_f64();
    verdict(
        bad == 0 && t < 60.0,
        format!("{pairs} pairs, {} distinct distances, {bad} violations, {t:.1} s", distinct.len()),
    )
}

fn children_tile_parent(parent: &Tile) -> bool {
    let scaled = parent.vertices().map(|v| v.mul_gauss(&inflation_multiplier()));
    let mut area = BigRational::from_integer(0.into());
    for child in parent.substitute() {
        let v = child.vertices();
        if !v.iter().all(|p| triangle_contains(&scaled, p)) {
            return false;
        }
        area += doubled_area(&v[0], &v[1], &v[2]).abs();
    }
    // doubled areas: five unit children fill the parent of area 5
    area == BigRational::from_integer(10.into()) && doubled_area(&scaled[0], &scaled[1], &scaled[2]).abs() == area
}

fn nesting_and_geometry() -> Verdict {
    let mut prev = Patch::from_seed(Seed::Single);
    for n in 0..=5 {
        let next = prev.inflate(1).unwrap();
        let set: HashSet<&Tile> = next.tiles().iter().collect();
        if !prev.tiles().iter().all(|t| set.contains(t)) {
            return verdict(false, format!("sigma^{n} not contained in sigma^{}", n + 1));
        }
        prev = next;
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    for i in 0..1000 {
        let t = Tile::new(
            point(rng.gen_range(-10_000..10_000), rng.gen_range(-10_000..10_000), rng.gen_range(0..6)),
            AngleIndex::new(rng.gen_range(0..4), rng.gen_range(0..12)),
            if rng.gen() { Chirality::Plus } else { Chirality::Minus },
        );
        if !children_tile_parent(&t) {
            return verdict(false, format!("random tile #{i} {t} is not tiled by its children"));
        }
    }
    verdict(true, "nesting for n <= 5; 1000 random tiles: vertices inside, areas sum to 5")
}

fn bessel_accuracy() -> Verdict {
    let n = 10_000;
    let mut worst = (0.0f64, 0.0f64);
    for i in 0..n {
        let z = 100.0 * i as f64 / (n - 1) as f64;
        let err = (bessel_j0(z).unwrap() - j0_series(z)).abs();
        if err > worst.0 {
            worst = (err, z);
        }
    }
    // bisection on the library's J0
    let (mut a, mut b) = (2.0f64, 3.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if bessel_j0(mid).unwrap() > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let zero = 0.5 * (a + b);
    let oracle_zero = j0_root(2.0, 3.0);
    let zero_err = (zero - 2.404_825_557_695_773).abs().max((zero - oracle_zero).abs());
    verdict(
        worst.0 <= 1e-10 && zero_err <= 1e-10,
        format!(
            "max |error| {:.2e} at z = {:.3} over {n} points; first zero {zero:.15} (error {zero_err:.1e})",
            worst.0, worst.1
        ),
    )
}

fn local_maxima(p: &IntensityProfile, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let (k, v) = (&p.kgrid, &p.values);
    let mut out: Vec<(f64, f64)> = (1..k.len() - 1)
        .filter(|&i| k[i] >= lo && k[i] <= hi && v[i] > v[i - 1] && v[i] >= v[i + 1])
        .map(|i| (v[i], k[i]))
        .collect();
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    out
}

fn ring_positions(shared: &mut Shared) -> Verdict {
    let start = Instant::now();
    let p = shared.unit_profile();
    let top: Vec<f64> = local_maxima(p, 0.9, 2.3).iter().take(4).map(|m| m.1).collect();
    let matched = top.len() == 4
        && MAIN_RINGS.iter().all(|r| top.iter().any(|k| (k - r).abs() <= 0.01))
        && top.iter().all(|k| MAIN_RINGS.iter().any(|r| (k - r).abs() <= 0.01));
    let t = start.elapsed().as_secs_f64();
    verdict(
        matched && t < 600.0,
        format!("steps 7, rmax 30: four largest maxima at {top:?}, {t:.1} s"),
    )
}

fn fits_by_s(records: &[PeakRecord], mmax: u64) -> BTreeMap<u32, GroupFit> {
    let coprime: Vec<PeakRecord> = records.iter().filter(|r| r.ell == 0 && r.m <= mmax).cloned().collect();
    group_fits(&coprime).into_iter().map(|f| (f.s, f)).collect()
}

fn decay_and_collapse(shared: &mut Shared) -> Verdict {
    let p = shared.unit_profile();
    let records = peak_table(p, 400, 0.01).unwrap();
    let literal = fits_by_s(&records, 100);
    let extended = fits_by_s(&records, 400);
    let s2_literal = records.iter().filter(|r| r.ell == 0 && r.s == 2 && r.m <= 100).count();
    let (Some(c0), Some(c1)) = (literal.get(&0), literal.get(&1)) else {
        return verdict(false, "missing s = 0 or s = 1 group for k^2 <= 100");
    };
    let r1 = c1.c / c0.c;
    let literal_ok = c0.rel_rms_residual < 0.25 && c1.rel_rms_residual < 0.25 && (1.6..=2.4).contains(&r1);
    let Some(e2) = extended.get(&2) else {
        return verdict(false, "no s = 2 group even for k^2 <= 400");
    };
    let e0 = &extended[&0];
    let r2x = e2.c / e0.c;
    let extended_ok = extended.values().all(|f| f.rel_rms_residual < 0.25) && (3.2..=4.8).contains(&r2x);
    verdict(
        literal_ok && extended_ok,
        format!(
            "k^2 <= 100: c1/c0 = {r1:.3}, residuals {:.3}/{:.3}, s = 2 rings: {s2_literal}; \
             k^2 <= 400: c2/c0 = {r2x:.3} ({} rings), residuals {:.3}/{:.3}/{:.3}",
            c0.rel_rms_residual,
            c1.rel_rms_residual,
            e2.points,
            e0.rel_rms_residual,
            extended[&1].rel_rms_residual,
            e2.rel_rms_residual
        ),
    )
}

fn balanced_case() -> Verdict {
    let patch = inflate(Seed::Single, 7).unwrap();
    let ac = estimate_autocorr(&patch, &Weights::ints(1, -1), 30.0, Estimator::ErodedCore).unwrap();
    let p = intensity_profile(&ac, 4.0, 0.001).unwrap();
    let delta = 0.01;
    let centre = ring_intensity(&p, 0.0, delta).unwrap();
    let (mut best, mut at) = (f64::NEG_INFINITY, 0.0);
    for &k in p.kgrid.iter().skip(1) {
        if k + delta > p.kmax() {
            break;
        }
        let r = ring_intensity(&p, k, delta).unwrap();
        if r > best {
            best = r;
            at = k;
        }
    }
    let frac = centre.abs() / best;
    verdict(
        frac < 0.05,
        format!("ring(0) = {centre:.3e}, max ring {best:.3e} at k = {at:.3}, |ratio| = {:.1}%", 100.0 * frac),
    )
}

fn read_columns(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let mut cols = vec![Vec::new(); header.len()];
    for line in lines {
        for (c, v) in cols.iter_mut().zip(line.split(',')) {
            c.push(v.parse().unwrap());
        }
    }
    (header, cols)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pinwheel"))
}

fn convergence() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["convergence", "--steps", "5,6,7", "--rmax", "30", "--kmax", "2.5"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    if !status.status.success() {
        return verdict(false, format!("convergence command failed: {}", String::from_utf8_lossy(&status.stderr)));
    }
    let (header, cols) = read_columns(&dir.path().join("convergence.csv"));
    if header != ["k", "I_steps5", "I_steps6", "I_steps7"] {
        return verdict(false, format!("unexpected header {header:?}"));
    }
    let profile = |c: usize| IntensityProfile::new(cols[0].clone(), cols[c].clone(), header[c].clone()).unwrap();
    let (p6, p7) = (profile(2), profile(3));
    let deviation = |delta: f64| {
        MAIN_RINGS
            .iter()
            .map(|&k| {
                let a = ring_intensity(&p6, k, delta).unwrap();
                let b = ring_intensity(&p7, k, delta).unwrap();
                (a - b).abs() / b.abs()
            })
            .collect::<Vec<f64>>()
    };
    // window matched to the resolution 1/rmax of the steps 6 profile
    let delta = 5f64.sqrt() / 30.0;
    let dev = deviation(delta);
    let narrow = deviation(0.01);
    let worst = dev.iter().cloned().fold(0.0, f64::max);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{:.1}%", 100.0 * x)).collect::<Vec<_>>().join(" ");
    verdict(
        worst < 0.10,
        format!(
            "steps 6 vs 7 rings at 1, sqrt2, 2, sqrt5 with delta = {delta:.4}: {} (info, delta = 0.01: {})",
            fmt(&dev),
            fmt(&narrow)
        ),
    )
}

fn r2_and_powder() -> Verdict {
    let table = r2_table(10_000);
    if let Some(m) = (0..=10_000u64).find(|&m| r2(m) != table[m as usize]) {
        return verdict(false, format!("r2({m}) = {} but lattice count is {}", r2(m), table[m as usize]));
    }
    let p = powder_reference(5).unwrap().normalized_to(1.0).unwrap();
    let got: Vec<(u64, String)> = p.rings.iter().map(|r| (r.m, r.weight.to_string())).collect();
    let want: Vec<(u64, String)> = [(1, "1"), (2, "1"), (4, "1"), (5, "2")].iter().map(|&(m, w)| (m, w.into())).collect();
    verdict(got == want, format!("r2 = lattice count for m <= 10^4; normalized powder {got:?}"))
}

fn determinism() -> Verdict {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for (dir, threads) in dirs.iter().zip(["1", "4"]) {
        let out = bin()
            .args(["pipeline", "--threads", threads])
            .arg("--out-dir")
            .arg(dir.path())
            .output()
            .unwrap();
        if !out.status.success() {
            return verdict(false, format!("pipeline failed: {}", String::from_utf8_lossy(&out.stderr)));
        }
    }
    let files = ["points.csv", "autocorr.csv", "intensity.csv", "peaks.csv", "fits.csv", "powder.csv"];
    for f in files {
        let a = std::fs::read(dirs[0].path().join(f)).unwrap();
        let b = std::fs::read(dirs[1].path().join(f)).unwrap();
        if a != b {
            return verdict(false, format!("{f} differs between --threads 1 and --threads 4"));
        }
    }
    verdict(true, format!("default pipeline, {} files byte-identical for --threads 1 and 4", files.len()))
}

fn main() {
    let mut shared = Shared { unit: None };
    let mut failed = 0;
    let mut report = |id: u32, name: &str, f: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = f();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        if !v.pass {
            failed += 1;
        }
        println!("{tag} {id:>2} {name}: {} [{:.1} s]", v.detail, start.elapsed().as_secs_f64());
    };
    report(1, "census triple agreement", &mut census_agreement);
    report(2, "census symmetry and inequality chains", &mut census_identities);
    report(3, "distance set of the n = 5 patch", &mut distance_set);
    report(4, "fixed-point nesting and child geometry", &mut nesting_and_geometry);
    report(5, "Bessel J0 accuracy", &mut bessel_accuracy);
    report(6, "square-lattice ring positions", &mut || ring_positions(&mut shared));
    report(7, "peak decay and 2^s collapse", &mut || decay_and_collapse(&mut shared));
    report(8, "balanced weights, no central peak", &mut balanced_case);
    report(9, "convergence across inflation depths", &mut convergence);
    report(10, "r2 and powder normalization", &mut r2_and_powder);
    report(11, "determinism across thread counts", &mut determinism);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
