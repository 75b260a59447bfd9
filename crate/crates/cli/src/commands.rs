use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use pinwheel::analysis::{group_fits, peak_table};
use pinwheel::correlation::{estimate_autocorr, RadialAutocorrelation};
use pinwheel::diffraction::{intensity_profile, powder_reference, ring_intensity, IntensityProfile};
use pinwheel::io::{self as csvio, format_number};
use pinwheel::tiling::{census_matrix, inflate, Patch, Seed};

use crate::args::*;
use crate::manifest::{Parameters, RunManifest};
use crate::CliError;

pub const STEPS_CAP: u32 = 9;

type Result<T> = std::result::Result<T, CliError>;

/// Executes one command; progress lines go to `out`.
pub fn run(cli: Cli, out: &mut (dyn Write + Send)) -> Result<()> {
    match cli.command {
        Command::Generate(a) => with_threads(&a.common.clone(), || generate(a, out)),
        Command::Census(a) => census(a, out),
        Command::Autocorr(a) => with_threads(&a.common.clone(), || autocorr(a, out)),
        Command::Diffract(a) => with_threads(&a.common.clone(), || diffract(a, out)),
        Command::Peaks(a) => with_threads(&a.common.clone(), || peaks(a, out)),
        Command::Powder(a) => with_threads(&a.common.clone(), || powder(a, out)),
        Command::Pipeline(a) => with_threads(&a.common.clone(), || pipeline(a, out)),
        Command::Convergence(a) => with_threads(&a.common.clone(), || convergence(a, out)),
    }
}

fn with_threads<T>(common: &Common, f: impl FnOnce() -> Result<T> + Send) -> Result<T>
where
    T: Send,
{
    if common.threads == Some(0) {
        return Err(CliError::Param("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Param(format!("cannot start thread pool: {e}")))?;
    pool.install(f)
}

/// Writes files into one directory and remembers them for the manifest.
struct Session {
    dir: PathBuf,
    command: &'static str,
    parameters: Parameters,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    started: Instant,
}

impl Session {
    fn new(command: &'static str, common: &Common) -> Result<Self> {
        fs::create_dir_all(&common.out_dir)?;
        Ok(Session {
            dir: common.out_dir.clone(),
            command,
            parameters: Parameters {
                threads: rayon::current_num_threads(),
                ..Parameters::default()
            },
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    fn open(&mut self, path: &Path) -> Result<BufReader<File>> {
        let f = File::open(path).map_err(|e| {
            CliError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        self.inputs.push(path.to_path_buf());
        Ok(BufReader::new(f))
    }

    fn write(
        &mut self,
        name: &str,
        out: &mut (dyn Write + Send),
        f: impl FnOnce(&mut BufWriter<File>) -> pinwheel::Result<()>,
    ) -> Result<()> {
        let path = self.dir.join(name);
        let mut w = BufWriter::new(File::create(&path)?);
        f(&mut w)?;
        w.flush()?;
        writeln!(out, "wrote {}", path.display())?;
        self.outputs.push(path);
        Ok(())
    }

    fn finish(self, out: &mut (dyn Write + Send)) -> Result<()> {
        let path = self.dir.join("manifest.json");
        let mut outputs = self.outputs;
        outputs.push(path.clone());
        let m = RunManifest {
            command: self.command.into(),
            parameters: self.parameters,
            inputs: self.inputs,
            outputs,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            version: env!("CARGO_PKG_VERSION").into(),
        };
        fs::write(&path, m.to_json())?;
        writeln!(out, "wrote {}", path.display())?;
        Ok(())
    }
}

fn build_patch(steps: u32, seed: Seed) -> Result<Patch> {
    if steps > STEPS_CAP {
        return Err(CliError::Cap(format!("--steps {steps} exceeds the cap of {STEPS_CAP}")));
    }
    Ok(inflate(seed, steps)?)
}

fn set_correlation(p: &mut Parameters, c: &CorrelationArgs) {
    p.weights = Some(c.weights.to_string());
    p.rmax = Some(c.rmax);
    p.estimator = Some(c.estimator.name().into());
}

fn set_grid(p: &mut Parameters, g: &GridArgs) {
    p.kmax = Some(g.kmax);
    p.dk = Some(g.dk);
}

fn generate(a: GenerateArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let mut s = Session::new("generate", &a.common)?;
    s.parameters.seed = Some(a.tiling.seed.name().into());
    s.parameters.steps = Some(vec![a.tiling.steps]);
    let patch = build_patch(a.tiling.steps, a.tiling.seed)?;
    s.write("points.csv", out, |w| csvio::write_points(w, patch.tiles()))?;
    s.finish(out)
}

fn census(a: CensusArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let counts = match a.seed {
        Seed::Single => (1, 0),
        Seed::CensusPair => (1, 1),
        Seed::Custom => return Err(CliError::Param("census needs the single or census-pair seed".into())),
    };
    let c = census_matrix(a.steps, counts);
    writeln!(out, "n={} seed={}", a.steps, a.seed)?;
    writeln!(out, "fplus {}", row(&c.fplus))?;
    writeln!(out, "fminus {}", row(&c.fminus))?;
    writeln!(out, "total {}", c.total())?;
    Ok(())
}

fn row<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn profile_from(ac: &RadialAutocorrelation, g: &GridArgs) -> Result<IntensityProfile> {
    Ok(intensity_profile(ac, g.kmax, g.dk)?)
}

fn autocorr(a: AutocorrArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let mut s = Session::new("autocorr", &a.common)?;
    set_correlation(&mut s.parameters, &a.correlation);
    let tiles = csvio::read_points(s.open(&a.points)?)?;
    let patch = Patch::from_tiles(tiles, 0);
    let c = &a.correlation;
    let ac = estimate_autocorr(&patch, &c.weights, c.rmax, c.estimator)?;
    s.write("autocorr.csv", out, |w| csvio::write_autocorr(w, &ac))?;
    s.finish(out)
}

fn diffract(a: DiffractArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let mut s = Session::new("diffract", &a.common)?;
    set_grid(&mut s.parameters, &a.grid);
    let ac = csvio::read_autocorr(s.open(&a.autocorr)?)?;
    let p = profile_from(&ac, &a.grid)?;
    s.write("intensity.csv", out, |w| csvio::write_intensity(w, &p))?;
    s.finish(out)
}

fn write_peaks(s: &mut Session, p: &IntensityProfile, mmax: u64, delta: f64, out: &mut (dyn Write + Send)) -> Result<()> {
    let records = peak_table(p, mmax, delta)?;
    let fits = group_fits(&records);
    s.write("peaks.csv", out, |w| csvio::write_peaks(w, &records))?;
    s.write("fits.csv", out, |w| csvio::write_fits(w, &fits))
}

fn peaks(a: PeaksArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let mut s = Session::new("peaks", &a.common)?;
    s.parameters.mmax = Some(a.rings.mmax);
    s.parameters.delta = Some(a.rings.delta);
    let path = a.intensity.clone();
    let p = csvio::read_intensity(s.open(&path)?, &path.display().to_string())?;
    write_peaks(&mut s, &p, a.rings.mmax, a.rings.delta, out)?;
    s.finish(out)
}

fn powder(a: PowderArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let mut s = Session::new("powder", &a.common)?;
    s.parameters.mmax = Some(a.mmax);
    s.parameters.first_ring = a.first_ring;
    let mut p = powder_reference(a.mmax)?;
    if let Some(t) = a.first_ring {
        p = p.normalized_to(t)?;
    }
    s.write("powder.csv", out, |w| csvio::write_powder(w, &p))?;
    s.finish(out)
}

/// Largest `m ≤ mmax` whose ring window still fits below `kmax`.
fn reachable_mmax(mmax: u64, kmax: f64, delta: f64) -> u64 {
    let top = kmax - delta;
    if top < 1.0 {
        return 0;
    }
    let mut m = (top * top).floor() as u64;
    while m > 0 && (m as f64).sqrt() > top {
        m -= 1;
    }
    m.min(mmax)
}

fn pipeline(a: PipelineArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let mut s = Session::new("pipeline", &a.common)?;
    s.parameters.seed = Some(a.tiling.seed.name().into());
    s.parameters.steps = Some(vec![a.tiling.steps]);
    set_correlation(&mut s.parameters, &a.correlation);
    set_grid(&mut s.parameters, &a.grid);
    s.parameters.mmax = Some(a.rings.mmax);
    s.parameters.delta = Some(a.rings.delta);

    let patch = build_patch(a.tiling.steps, a.tiling.seed)?;
    s.write("points.csv", out, |w| csvio::write_points(w, patch.tiles()))?;
    let c = &a.correlation;
    let ac = estimate_autocorr(&patch, &c.weights, c.rmax, c.estimator)?;
    s.write("autocorr.csv", out, |w| csvio::write_autocorr(w, &ac))?;
    let p = profile_from(&ac, &a.grid)?;
    s.write("intensity.csv", out, |w| csvio::write_intensity(w, &p))?;

    let mmax = reachable_mmax(a.rings.mmax, a.grid.kmax, a.rings.delta);
    if mmax < a.rings.mmax {
        writeln!(out, "note: rings limited to k^2 <= {mmax} by kmax = {}", a.grid.kmax)?;
    }
    s.parameters.mmax_effective = Some(mmax);
    if mmax >= 1 {
        write_peaks(&mut s, &p, mmax, a.rings.delta, out)?;
        let first = ring_intensity(&p, 1.0, a.rings.delta)?;
        s.parameters.first_ring = Some(first);
        let powder = powder_reference(mmax)?.normalized_to(first)?;
        s.write("powder.csv", out, |w| csvio::write_powder(w, &powder))?;
    }
    s.finish(out)
}

fn convergence(a: ConvergenceArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let mut s = Session::new("convergence", &a.common)?;
    let mut steps = a.steps.clone();
    steps.sort_unstable();
    steps.dedup();
    let deepest = *steps.last().ok_or_else(|| CliError::Param("--steps needs at least one value".into()))?;
    s.parameters.seed = Some(a.seed.name().into());
    s.parameters.steps = Some(steps.clone());
    s.parameters.weights = Some(a.weights.to_string());
    s.parameters.rmax = Some(a.rmax);
    s.parameters.estimator = Some(a.estimator.name().into());
    set_grid(&mut s.parameters, &a.grid);

    let mut columns = Vec::new();
    for &n in &steps {
        let patch = build_patch(n, a.seed)?;
        let rmax = a.rmax * 5f64.powf(-0.5 * f64::from(deepest - n));
        let ac = estimate_autocorr(&patch, &a.weights, rmax, a.estimator)?;
        columns.push(profile_from(&ac, &a.grid)?);
    }
    let header: Vec<String> = std::iter::once("k".to_string())
        .chain(steps.iter().map(|n| format!("I_steps{n}")))
        .collect();
    let kgrid = columns[0].kgrid.clone();
    s.write("convergence.csv", out, |w| {
        writeln!(w, "{}", header.join(","))?;
        for (i, k) in kgrid.iter().enumerate() {
            let row: Vec<String> = std::iter::once(format_number(*k))
                .chain(columns.iter().map(|c| format_number(c.values[i])))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    })?;
    s.finish(out)
}
