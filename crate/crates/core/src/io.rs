//! CSV import and export of points, autocorrelations, profiles and tables.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::analysis::{GroupFit, PeakRecord};
use crate::arith::{AngleIndex, GaussInt, Point5, SqDist};
use crate::correlation::RadialAutocorrelation;
use crate::diffraction::{IntensityProfile, PowderReference};
use crate::error::{Error, Result};
use crate::tiling::{Chirality, Tile};

pub const POINTS_HEADER: [&str; 6] = ["a", "b", "exp5", "quarter", "dphi", "chi"];
pub const AUTOCORR_HEADER: [&str; 4] = ["m", "L", "r", "eta"];
pub const INTENSITY_HEADER: [&str; 2] = ["k", "I"];
pub const POWDER_HEADER: [&str; 2] = ["k", "weight"];
pub const PEAKS_HEADER: [&str; 6] = ["m", "ell", "s", "k", "ratio", "collapsed"];
pub const FITS_HEADER: [&str; 4] = ["group_ell", "group_s", "c", "rel_rms_residual"];

/// Plain decimal rendering with 15 significant digits and no trailing zeros.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.14e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let mut out = String::new();
    if x < 0.0 {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(digits);
    } else {
        let int_len = exp as usize + 1;
        if digits.len() <= int_len {
            out.push_str(digits);
            out.extend(std::iter::repeat_n('0', int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

/// `p/q` in lowest terms, or `p` when `q = 1`.
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            (!q.is_zero()).then(|| BigRational::new(p, q))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::Parse { line, msg: format!("{kind:?}") },
    }
}

fn writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    wtr.write_record(header).map_err(csv_error)?;
    Ok(wtr)
}

fn finish<W: Write>(mut wtr: csv::Writer<W>) -> Result<()> {
    wtr.flush()?;
    Ok(())
}

/// Reads every data row after checking the header. Each row is handed over
/// with its 1-based line number.
fn read_rows<R: Read>(r: R, header: &[&str], mut f: impl FnMut(usize, &csv::StringRecord) -> Result<()>) -> Result<()> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let got = rdr.headers().map_err(csv_error)?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header {}, found {}", header.join(","), got.iter().collect::<Vec<_>>().join(",")),
        });
    }
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        f(line, &rec)?;
    }
    Ok(())
}

fn field<T: FromStr>(rec: &csv::StringRecord, i: usize, line: usize, name: &str) -> Result<T> {
    rec.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| Error::Parse {
        line,
        msg: format!("bad or missing {name}"),
    })
}

pub fn write_points<W: Write>(w: W, tiles: &[Tile]) -> Result<()> {
    let mut wtr = writer(w, &POINTS_HEADER)?;
    for t in tiles {
        let n = t.point.num();
        wtr.write_record([
            n.re.to_string(),
            n.im.to_string(),
            t.point.exp5().to_string(),
            t.angle.quarter.to_string(),
            t.angle.dphi.to_string(),
            t.chi.sign().to_string(),
        ])
        .map_err(csv_error)?;
    }
    finish(wtr)
}

pub fn read_points<R: Read>(r: R) -> Result<Vec<Tile>> {
    let mut tiles = Vec::new();
    read_rows(r, &POINTS_HEADER, |line, rec| {
        let a: BigInt = field(rec, 0, line, "a")?;
        let b: BigInt = field(rec, 1, line, "b")?;
        let exp5: u32 = field(rec, 2, line, "exp5")?;
        let quarter: u8 = field(rec, 3, line, "quarter")?;
        let dphi: u32 = field(rec, 4, line, "dphi")?;
        let chi: i64 = field(rec, 5, line, "chi")?;
        if quarter > 3 {
            return Err(Error::Parse { line, msg: format!("quarter must be 0..3, got {quarter}") });
        }
        let chi = Chirality::from_sign(chi).ok_or_else(|| Error::Parse {
            line,
            msg: format!("chi must be 1 or -1, got {chi}"),
        })?;
        tiles.push(Tile::new(
            Point5::new(GaussInt::new(a, b), exp5),
            AngleIndex::new(quarter.into(), dphi),
            chi,
        ));
        Ok(())
    })?;
    Ok(tiles)
}

pub fn write_autocorr<W: Write>(w: W, ac: &RadialAutocorrelation) -> Result<()> {
    let mut wtr = writer(w, &AUTOCORR_HEADER)?;
    wtr.write_record(["0", "0", "0", &format_ratio(&ac.eta0)]).map_err(csv_error)?;
    for (d, eta) in &ac.coeffs {
        wtr.write_record([d.m().to_string(), d.l().to_string(), format_number(d.r()), format_ratio(eta)])
            .map_err(csv_error)?;
    }
    finish(wtr)
}

/// Reads an autocorrelation table. The reference count is not stored in the
/// file and comes back as 0; `rmax` is the largest distance present.
pub fn read_autocorr<R: Read>(r: R) -> Result<RadialAutocorrelation> {
    let mut eta0 = None;
    let mut coeffs = BTreeMap::new();
    read_rows(r, &AUTOCORR_HEADER, |line, rec| {
        let m: BigUint = field(rec, 0, line, "m")?;
        let l: u32 = field(rec, 1, line, "L")?;
        let eta = rec.get(3).and_then(parse_ratio).ok_or_else(|| Error::Parse {
            line,
            msg: "bad or missing eta".into(),
        })?;
        if m.is_zero() {
            if eta0.is_some() || !coeffs.is_empty() {
                return Err(Error::Parse { line, msg: "r = 0 row must come first, once".into() });
            }
            eta0 = Some(eta);
            return Ok(());
        }
        if eta0.is_none() {
            return Err(Error::Parse { line, msg: "first row must be r = 0".into() });
        }
        let d = SqDist::new(m.clone(), l).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        if d.m() != &m || d.l() != l {
            return Err(Error::Parse { line, msg: format!("distance {m}/5^{l} is not reduced") });
        }
        if coeffs.insert(d, eta).is_some() {
            return Err(Error::Parse { line, msg: "duplicate distance".into() });
        }
        Ok(())
    })?;
    let eta0 = eta0.ok_or(Error::Parse { line: 2, msg: "missing r = 0 row".into() })?;
    let rmax = coeffs.keys().next_back().map_or(0.0, SqDist::r);
    Ok(RadialAutocorrelation::new(eta0, coeffs, 0, rmax))
}

pub fn write_intensity<W: Write>(w: W, p: &IntensityProfile) -> Result<()> {
    let mut wtr = writer(w, &INTENSITY_HEADER)?;
    for (k, v) in p.kgrid.iter().zip(&p.values) {
        wtr.write_record([format_number(*k), format_number(*v)]).map_err(csv_error)?;
    }
    finish(wtr)
}

pub fn read_intensity<R: Read>(r: R, provenance: &str) -> Result<IntensityProfile> {
    let (mut ks, mut vs) = (Vec::new(), Vec::new());
    read_rows(r, &INTENSITY_HEADER, |line, rec| {
        ks.push(field::<f64>(rec, 0, line, "k")?);
        vs.push(field::<f64>(rec, 1, line, "I")?);
        Ok(())
    })?;
    IntensityProfile::new(ks, vs, provenance)
}

pub fn write_powder<W: Write>(w: W, p: &PowderReference) -> Result<()> {
    let mut wtr = writer(w, &POWDER_HEADER)?;
    for ring in &p.rings {
        let weight = ring.weight.to_f64().unwrap_or(f64::NAN);
        wtr.write_record([format_number(ring.k), format_number(weight)]).map_err(csv_error)?;
    }
    finish(wtr)
}

pub fn write_peaks<W: Write>(w: W, records: &[PeakRecord]) -> Result<()> {
    let mut wtr = writer(w, &PEAKS_HEADER)?;
    for r in records {
        wtr.write_record([
            r.m.to_string(),
            r.ell.to_string(),
            r.s.to_string(),
            format_number(r.k),
            format_number(r.ratio),
            format_number(r.collapsed),
        ])
        .map_err(csv_error)?;
    }
    finish(wtr)
}

pub fn write_fits<W: Write>(w: W, fits: &[GroupFit]) -> Result<()> {
    let mut wtr = writer(w, &FITS_HEADER)?;
    for f in fits {
        wtr.write_record([
            f.ell.to_string(),
            f.s.to_string(),
            format_number(f.c),
            format_number(f.rel_rms_residual),
        ])
        .map_err(csv_error)?;
    }
    finish(wtr)
}
