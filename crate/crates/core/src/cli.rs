//! Command-line front end. Physical parameters come only from the JSON config;
//! flags select grids, model, seed and paths. Each run prints one JSON line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::fitting::{self, DispersionParams, FitOptions, ParamBounds};
use crate::grid::{Grid1D, Quantity};
use crate::io;
use crate::params::{MaterialParams, ParamFile, ResonatorParams};
use crate::photoresponse::{self, FillingSlice, PhotoResponseParams};
use crate::polariton::{self, PolaritonModelKind, TransmissionOptions};
use crate::transport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

const GHZ: f64 = 1e9;

/// `start:stop` or `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: Option<usize>,
}

impl Range {
    fn axis(&self, scale: f64, default_count: usize) -> Result<Grid1D, Error> {
        Grid1D::new(self.start * scale, self.stop * scale, self.count.unwrap_or(default_count))
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(format!("expected a:b or a:b:n, got `{s}`"));
    }
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("`{p}` is not a number"));
    let (start, stop) = (num(parts[0])?, num(parts[1])?);
    if !(start.is_finite() && stop.is_finite() && start < stop) {
        return Err(format!("need finite a < b, got `{s}`"));
    }
    let count = match parts.get(2) {
        Some(p) => {
            let n = p.parse::<usize>().map_err(|_| format!("`{p}` is not a count"))?;
            if n < 2 {
                return Err(format!("count must be >= 2, got {n}"));
            }
            Some(n)
        }
        None => None,
    };
    Ok(Range { start, stop, count })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Coupled,
    Hopfield,
}

impl From<Model> for PolaritonModelKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Coupled => PolaritonModelKind::CoupledMode,
            Model::Hopfield => PolaritonModelKind::Hopfield,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Integer,
    Half,
}

#[derive(Debug, Args)]
struct Common {
    /// Parameter file (JSON); missing keys take the CH205 defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Field range in tesla, a:b[:n].
    #[arg(long = "b-range", value_parser = parse_range)]
    b_range: Option<Range>,
    /// Frequency range in GHz, a:b[:n].
    #[arg(long = "f-range", value_parser = parse_range)]
    f_range: Option<Range>,
    #[arg(long, value_enum, default_value = "hopfield")]
    model: Model,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write a PGM image and its mapping sidecar next to the output.
    #[arg(long)]
    render: bool,
}

#[derive(Debug, Parser)]
#[command(name = "landau-polariton", version, about = "Landau-polariton simulation and fitting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// THz transmission map over (B, f).
    SimulateTransmission {
        #[command(flatten)]
        common: Common,
    },
    /// Dark ρ_xx(B) trace.
    SimulateTransport {
        #[command(flatten)]
        common: Common,
    },
    /// Photo-response map over (B, f).
    SimulatePhotoresponse {
        #[command(flatten)]
        common: Common,
        /// Highest cyclotron harmonic in the localized channel.
        #[arg(long, default_value_t = 4)]
        harmonics: u32,
    },
    /// Crossings of the polariton branches with n·f_c, n = 2..=harmonics.
    DecayLoci {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        harmonics: u32,
    },
    /// Transmission dips from a map file.
    ExtractPeaks {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
        /// Minimum dip depth 1 − T.
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
        #[arg(long = "min-prominence", default_value_t = 0.02)]
        min_prominence: f64,
    },
    /// Fit (f_cav, η, m*/m_e, f_p) to a peak file; the config is the start point.
    FitDispersion {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
        /// Hold m*/m_e at the config value.
        #[arg(long = "fix-m-star")]
        fix_m_star: bool,
        #[arg(long, default_value_t = 200)]
        bootstrap: usize,
    },
    /// Lorentzian quality-factor fit to one transmission cut.
    FitQ {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
        /// Field of the cut (nearest map row).
        #[arg(long = "at-b", default_value_t = 0.0)]
        at_b: f64,
    },
    /// Keep rows at integer or half-integer filling and interpolate between them.
    SliceFilling {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = Result<T, Failure>;

/// Run with full argv (program name first). Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let text = e.render().to_string();
            eprintln!("{}", text.lines().next().unwrap_or("usage error"));
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            match e {
                Error::NonConvergence(_) => EXIT_NONCONVERGENCE,
                _ => EXIT_VALIDATION,
            }
        }
    }
}

fn load_config(path: Option<&Path>) -> CliResult<(MaterialParams, ResonatorParams)> {
    let pf = match path {
        Some(p) => ParamFile::parse(&read_text(p)?)?,
        None => ParamFile::default(),
    };
    Ok(pf.into_params()?)
}

fn read_text(p: &Path) -> CliResult<String> {
    fs::read_to_string(p).map_err(|e| {
        Failure::Lib(Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display()))))
    })
}

fn out_path(common: &Common, default: &str) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn f_axis(common: &Common) -> CliResult<Grid1D> {
    let r = common.f_range.unwrap_or(Range {
        start: 60.0,
        stop: 600.0,
        count: None,
    });
    Ok(r.axis(GHZ, 541)?)
}

fn b_axis(common: &Common, default: Range, default_count: usize) -> CliResult<Grid1D> {
    Ok(common.b_range.unwrap_or(default).axis(1.0, default_count)?)
}

/// Writes a map file and, with `--render`, the image and sidecar. Returns paths.
fn write_map(map: &crate::grid::ResponseMap, out: &Path, render: bool) -> CliResult<Vec<String>> {
    io::write_atomic(out, io::serialize_map(map).as_bytes())?;
    let mut paths = vec![path_str(out)];
    if render {
        let img = io::render_map(map);
        let pgm = out.with_extension("pgm");
        let side = out.with_extension("pgm.txt");
        io::write_atomic(&pgm, &img.to_pgm())?;
        io::write_atomic(&side, img.sidecar().as_bytes())?;
        paths.push(path_str(&pgm));
        paths.push(path_str(&side));
    }
    Ok(paths)
}

fn value_range(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

fn no_render(common: &Common, what: &str) -> CliResult<()> {
    if common.render {
        return Err(Failure::Usage(format!("--render applies to map outputs, not {what}")));
    }
    Ok(())
}

fn dispatch(command: Command) -> CliResult<Value> {
    match command {
        Command::SimulateTransmission { common } => {
            let (m, r) = load_config(common.config.as_deref())?;
            let kind = common.model.into();
            let b = b_axis(&common, Range { start: 0.0, stop: 1.2, count: None }, 241)?;
            let f = f_axis(&common)?;
            let map = polariton::transmission_map(&b, &f, kind, &r, &m, &TransmissionOptions::default())?;
            let out = out_path(&common, "transmission.csv");
            let outputs = write_map(&map, &out, common.render)?;
            Ok(json!({
                "command": "simulate-transmission",
                "model": kind.name(),
                "outputs": outputs,
                "n_b": b.count(),
                "n_f": f.count(),
                "coupling_GHz": r.coupling() / GHZ,
                "crossing_field_T": polariton::crossing_field(&r, &m),
            }))
        }
        Command::SimulateTransport { common } => {
            no_render(&common, "traces")?;
            let (m, r) = load_config(common.config.as_deref())?;
            let b = b_axis(&common, Range { start: 0.05, stop: 1.2, count: None }, 2000)?;
            let trace = transport::rho_xx_dark(&b, &r, &m)?;
            let out = out_path(&common, "transport.csv");
            let file = io::TraceFile::from_trace(&trace);
            io::write_atomic(&out, io::serialize_trace(&file)?.as_bytes())?;
            let (lo, hi) = value_range(&trace.rho_xx);
            Ok(json!({
                "command": "simulate-transport",
                "outputs": [path_str(&out)],
                "n_b": b.count(),
                "eta": trace.eta_used,
                "rho0_ohm": transport::drude_rho0(&m),
                "rho_min_ohm": lo,
                "rho_max_ohm": hi,
            }))
        }
        Command::SimulatePhotoresponse { common, harmonics } => {
            let (m, r) = load_config(common.config.as_deref())?;
            let kind = common.model.into();
            let b = b_axis(&common, Range { start: 0.05, stop: 1.2, count: None }, 461)?;
            let f = f_axis(&common)?;
            let p = PhotoResponseParams {
                n_max_harmonic: harmonics,
                ..Default::default()
            };
            let map = photoresponse::photoresponse_map(&b, &f, kind, &r, &m, &p)?;
            let out = out_path(&common, "photoresponse.csv");
            let outputs = write_map(&map, &out, common.render)?;
            let (lo, hi) = value_range(map.grid.values());
            Ok(json!({
                "command": "simulate-photoresponse",
                "model": kind.name(),
                "outputs": outputs,
                "n_b": b.count(),
                "n_f": f.count(),
                "min": lo,
                "max": hi,
            }))
        }
        Command::DecayLoci { common, harmonics } => {
            no_render(&common, "loci")?;
            if harmonics < 2 {
                return Err(Failure::Usage("--harmonics must be >= 2".into()));
            }
            let (m, r) = load_config(common.config.as_deref())?;
            let kind = common.model.into();
            let range = common.b_range.unwrap_or(Range { start: 0.05, stop: 1.2, count: None });
            let loci = photoresponse::decay_loci(kind, &r, &m, 2..=harmonics, range.start, range.stop)?;
            let out = out_path(&common, "loci.csv");
            io::write_atomic(&out, io::serialize_loci(&loci).as_bytes())?;
            let list: Vec<Value> = loci
                .iter()
                .map(|l| json!({"n": l.n, "branch": l.branch.label(), "B_T": l.b_star, "f_GHz": l.f_star / GHZ}))
                .collect();
            Ok(json!({
                "command": "decay-loci",
                "model": kind.name(),
                "outputs": [path_str(&out)],
                "count": loci.len(),
                "loci": list,
            }))
        }
        Command::ExtractPeaks { common, input, threshold, min_prominence } => {
            no_render(&common, "peak lists")?;
            let map = io::parse_map(&read_text(&input)?)?;
            let peaks = fitting::extract_peaks(&map, threshold, min_prominence)?;
            let out = out_path(&common, "peaks.csv");
            io::write_atomic(&out, io::serialize_peaks(&peaks).as_bytes())?;
            Ok(json!({
                "command": "extract-peaks",
                "outputs": [path_str(&out)],
                "n_peaks": peaks.len(),
            }))
        }
        Command::FitDispersion { common, input, fix_m_star, bootstrap } => {
            no_render(&common, "fit results")?;
            let (m, r) = load_config(common.config.as_deref())?;
            let kind = common.model.into();
            let peaks = io::parse_peaks(&read_text(&input)?)?;
            let theta0 = DispersionParams::from_params(&m, &r);
            let mut bounds = ParamBounds::around(&theta0);
            if fix_m_star {
                bounds = bounds.fix_m_star(theta0.m_star_ratio);
            }
            let opts = FitOptions {
                seed: common.seed,
                bootstrap_samples: bootstrap,
                ..Default::default()
            };
            let fit = fitting::fit_dispersion(&peaks, kind, &theta0, &bounds, &opts)?;
            if !fit.converged {
                return Err(Error::NonConvergence(format!(
                    "simplex did not contract after {} starts (rss {:e} Hz^2)",
                    fit.n_restarts_used, fit.rss
                ))
                .into());
            }
            let t = fit.theta;
            let unc = fit.uncertainty.map(|u| {
                json!({"f_cav_GHz": u.f_cav / GHZ, "eta": u.eta, "m_star_ratio": u.m_star_ratio, "f_p_GHz": u.f_p / GHZ})
            });
            let body = json!({
                "model": kind.name(),
                "f_cav_GHz": t.f_cav / GHZ,
                "eta": t.eta,
                "m_star_ratio": t.m_star_ratio,
                "f_p_GHz": t.f_p / GHZ,
                "uncertainty": unc,
                "rss_Hz2": fit.rss,
                "n_points": fit.n_points,
                "seed": common.seed,
            });
            let out = out_path(&common, "fit.json");
            io::write_atomic(&out, (serde_json::to_string_pretty(&body).expect("json") + "\n").as_bytes())?;
            Ok(json!({
                "command": "fit-dispersion",
                "outputs": [path_str(&out)],
                "eta": t.eta,
                "eta_uncertainty": fit.uncertainty.map(|u| u.eta),
                "f_cav_GHz": t.f_cav / GHZ,
                "m_star_ratio": t.m_star_ratio,
                "f_p_GHz": t.f_p / GHZ,
                "n_points": fit.n_points,
                "converged": fit.converged,
            }))
        }
        Command::FitQ { common, input, at_b } => {
            no_render(&common, "fit results")?;
            let map = io::parse_map(&read_text(&input)?)?;
            if map.quantity != Quantity::Transmission {
                return Err(Error::param("input", "fit-q needs a transmission map").into());
            }
            let ib = map.b_axis().nearest_index(at_b);
            let f = map.f_axis();
            let (mut freqs, mut trans) = (Vec::new(), Vec::new());
            for (j, &t) in map.grid.row(ib).iter().enumerate() {
                let fj = f.sample(j);
                if let Some(w) = common.f_range {
                    if fj < w.start * GHZ || fj > w.stop * GHZ {
                        continue;
                    }
                }
                freqs.push(fj);
                trans.push(t);
            }
            let q = fitting::fit_quality_factor(&freqs, &trans)?;
            let body = json!({
                "B_T": map.b_axis().sample(ib),
                "Q": q.q,
                "f0_GHz": q.f0 / GHZ,
                "half_width_GHz": q.half_width / GHZ,
                "depth": q.depth,
                "baseline": q.baseline,
                "resolved": q.resolved,
            });
            let out = out_path(&common, "q_fit.json");
            io::write_atomic(&out, (serde_json::to_string_pretty(&body).expect("json") + "\n").as_bytes())?;
            Ok(json!({
                "command": "fit-q",
                "outputs": [path_str(&out)],
                "Q": q.q,
                "f0_GHz": q.f0 / GHZ,
                "resolved": q.resolved,
            }))
        }
        Command::SliceFilling { common, input, which, tol } => {
            let (m, _) = load_config(common.config.as_deref())?;
            let map = io::parse_map(&read_text(&input)?)?;
            let which = match which {
                Which::Integer => FillingSlice::Integer,
                Which::Half => FillingSlice::HalfInteger,
            };
            let sliced = photoresponse::slice_by_filling(&map, &m, which, tol)?;
            let out = out_path(&common, "slice.csv");
            let outputs = write_map(&sliced, &out, common.render)?;
            let (lo, hi) = value_range(sliced.grid.values());
            Ok(json!({
                "command": "slice-filling",
                "outputs": outputs,
                "which": match which { FillingSlice::Integer => "integer", FillingSlice::HalfInteger => "half" },
                "tol": tol,
                "min": lo,
                "max": hi,
            }))
        }
    }
}
