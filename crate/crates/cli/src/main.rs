//! `gaussent`: model, analyze and tabulate two-mode Gaussian entanglement.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gaussent_core::anchors::Anchors;
use gaussent_core::epr::{degree_of_epr, epr_vs_loss, EprReport};
use gaussent_core::gaussian::{
    apply_loss, check_symmetric_form, entangle_on_beamsplitter, CorrelationMatrix4, SqueezedBeam,
    TwoModeState,
};
use gaussent_core::photon_number::{decompose, PhotonDecomposition};
use gaussent_core::protocols::{
    contour_grid, teleport_fidelity, GridParams, Metric, TeleportFidelity, DEFAULT_GRID_RESOLUTION,
    DEFAULT_NEXCESS_MAX, DEFAULT_NMIN_MAX,
};
use gaussent_core::separability::{
    inseparability_report, inseparability_vs_loss, standard_form_restrictions,
    InseparabilityReport, StandardFormRestrictions, SYMMETRIC_FORM_TOL,
};
use gaussent_core::spectra::{
    cm_at_frequency, derive_spectra, parse_spectra, write_derived, OutputFormat, Units,
};
use gaussent_core::{Error, Result};
use serde::Serialize;

const FIXTURES_ENV: &str = "GAUSSENT_FIXTURES";

#[derive(Parser, Debug)]
#[command(
    name = "gaussent",
    version,
    about = "Two-mode Gaussian entanglement of squeezed beams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entangle two pure amplitude-squeezed beams, apply loss, and analyze the result
    Model {
        /// Amplitude variance of both input beams
        #[arg(long, conflicts_with_all = ["v1", "v2"], required_unless_present = "v1")]
        v: Option<f64>,
        /// Amplitude variance of the first input beam
        #[arg(long, requires = "v2")]
        v1: Option<f64>,
        /// Amplitude variance of the second input beam
        #[arg(long, requires = "v1")]
        v2: Option<f64>,
        /// Detection efficiency of both beams, in [0, 1]
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
    },
    /// Analyze a correlation matrix file or an anchor entry
    Analyze {
        /// Matrix JSON ({"order", "matrix"}) or anchor file; defaults to $GAUSSENT_FIXTURES or the bundled anchors
        #[arg(long)]
        cm: Option<PathBuf>,
        /// Anchor key such as 6.5MHz (anchor files only)
        #[arg(long)]
        at: Option<String>,
    },
    /// Tabulate inseparability and EPR degree against detection efficiency
    SweepLoss {
        /// Amplitude variance of both pure input beams
        #[arg(long)]
        v: f64,
        /// Number of efficiency samples from 0 to 1
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a protocol metric over the n_min / n_excess plane
    Contours {
        #[arg(long, value_enum)]
        metric: MetricArg,
        /// Photon budget per bandwidth per time (required for dense_ratio)
        #[arg(long)]
        n_encoding: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_NMIN_MAX)]
        nmin_max: f64,
        #[arg(long, default_value_t = DEFAULT_NEXCESS_MAX)]
        nexcess_max: f64,
        /// Samples along each axis
        #[arg(long, default_value_t = DEFAULT_GRID_RESOLUTION)]
        grid: usize,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Derive metric spectra from a measured spectra CSV
    Ingest {
        /// Spectra CSV with columns frequency_mhz,vx_plus,vx_minus,vy_plus,vy_minus,v_sum_plus,v_diff_minus
        input: PathBuf,
        /// Variance columns are in dB relative to shot noise
        #[arg(long)]
        db: bool,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Print the anchor fixture ($GAUSSENT_FIXTURES or the bundled copy)
    Fixtures,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Epr,
    Fidelity,
    #[value(name = "dense_ratio", alias = "dense-ratio")]
    DenseRatio,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Epr => Metric::Epr,
            MetricArg::Fidelity => Metric::Fidelity,
            MetricArg::DenseRatio => Metric::DenseRatio,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Serialize)]
struct Analysis {
    cm: CorrelationMatrix4,
    physical: bool,
    inseparability: InseparabilityReport,
    restrictions: StandardFormRestrictions,
    epr: EprReport,
    /// Absent when the matrix is not of the symmetric two-beam form.
    photons: Option<PhotonDecomposition>,
    teleportation: TeleportFidelity,
}

impl Analysis {
    fn of(cm: CorrelationMatrix4) -> Result<Self> {
        let inseparability = inseparability_report(&cm)?;
        let photons = if check_symmetric_form(&cm, SYMMETRIC_FORM_TOL) {
            Some(decompose(&cm)?)
        } else {
            None
        };
        Ok(Self {
            cm,
            physical: cm.is_physical(),
            restrictions: standard_form_restrictions(&cm),
            epr: degree_of_epr(&cm)?,
            photons,
            teleportation: teleport_fidelity(inseparability.degree)?,
            inseparability,
        })
    }
}

#[derive(Serialize)]
struct ModelOutput {
    state: TwoModeState,
    analysis: Analysis,
}

#[derive(Serialize)]
struct AnchorOutput {
    key: String,
    frequency_mhz: f64,
    statistical_error: f64,
    analysis: Analysis,
    /// Analysis of the state rebuilt from the reported sum/difference variances.
    #[serde(skip_serializing_if = "Option::is_none")]
    reported: Option<Analysis>,
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out).map_err(|e| Error::io("<stdout>", e))
}

/// Runs `body` against the output file, or stdout when no path is given.
fn emit(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Error::io(p, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w).map_err(|e| relabel_io(e, p))?;
            w.flush().map_err(|e| Error::io(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush().map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn relabel_io(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::io(path, source),
        Error::Csv(c) if c.is_io_error() => Error::io(path, io::Error::other(c.to_string())),
        other => other,
    }
}

fn fixture_path(explicit: Option<PathBuf>) -> Option<PathBuf> {
    explicit.or_else(|| std::env::var_os(FIXTURES_ENV).map(PathBuf::from))
}

fn load_anchors(path: Option<&Path>) -> Result<Anchors> {
    match path {
        Some(p) => Anchors::load(p),
        None => Ok(Anchors::bundled()),
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "--{name} must be positive (got {v})"
        )))
    }
}

fn model(v1: f64, v2: f64, eta: f64) -> Result<()> {
    check_positive("v1", v1)?;
    check_positive("v2", v2)?;
    let a = SqueezedBeam::pure_amplitude_squeezed(v1)?;
    let b = SqueezedBeam::pure_amplitude_squeezed(v2)?;
    let state = apply_loss(&entangle_on_beamsplitter(&a, &b)?, eta, eta)?;
    let out = ModelOutput {
        state,
        analysis: Analysis::of(state.cm)?,
    };
    emit(None, |w| write_json(&out, w))
}

fn analyze(cm: Option<PathBuf>, at: Option<String>) -> Result<()> {
    let path = fixture_path(cm);
    if at.is_none() {
        let p = path.ok_or_else(|| {
            Error::InvalidArgument("analyze needs --cm <matrix.json> or --at <anchor key>".into())
        })?;
        let text = std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
        let matrix: CorrelationMatrix4 = serde_json::from_str(&text)?;
        let out = Analysis::of(matrix)?;
        return emit(None, |w| write_json(&out, w));
    }
    let key = at.unwrap_or_default();
    let anchors = load_anchors(path.as_deref())?;
    let anchor = anchors.get(&key)?;
    let reported = match anchor.reported_row() {
        Some(row) => Some(Analysis::of(cm_at_frequency(&row)?)?),
        None => None,
    };
    let out = AnchorOutput {
        key,
        frequency_mhz: anchor.frequency_mhz,
        statistical_error: anchors.statistical_error,
        analysis: Analysis::of(anchor.cm)?,
        reported,
    };
    emit(None, |w| write_json(&out, w))
}

fn sweep_loss(v: f64, steps: usize, out: Option<PathBuf>) -> Result<()> {
    check_positive("v", v)?;
    if steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "--steps must be at least 2 (got {steps})"
        )));
    }
    // validates v through the state model
    SqueezedBeam::pure_amplitude_squeezed(v)?;
    emit(out.as_deref(), |w| {
        let io_err = |e| Error::io("<output>", e);
        writeln!(w, "eta,inseparability,epr").map_err(io_err)?;
        for k in 0..steps {
            let eta = k as f64 / (steps - 1) as f64;
            let i = inseparability_vs_loss(v, eta);
            let e = epr_vs_loss(v, eta);
            writeln!(w, "{eta},{i},{e}").map_err(io_err)?;
        }
        Ok(())
    })
}

#[allow(clippy::too_many_arguments)]
fn contours(
    metric: MetricArg,
    n_encoding: Option<f64>,
    nmin_max: f64,
    nexcess_max: f64,
    grid: usize,
    out: Option<PathBuf>,
    format: FormatArg,
) -> Result<()> {
    let grid = contour_grid(
        metric.into(),
        (0.0, nmin_max),
        (0.0, nexcess_max),
        (grid, grid),
        GridParams { n_encoding },
    )?;
    emit(out.as_deref(), |w| match format {
        FormatArg::Csv => grid.write_csv(w).map_err(|e| Error::io("<output>", e)),
        FormatArg::Json => write_json(&grid, w),
    })
}

fn ingest(input: PathBuf, db: bool, out: Option<PathBuf>, format: FormatArg) -> Result<()> {
    let text = std::fs::read_to_string(&input).map_err(|e| Error::io(&input, e))?;
    let units = if db { Units::Db } else { Units::Linear };
    let rows = parse_spectra(&text, units)?;
    let derived = derive_spectra(&rows);
    for s in &derived.skipped {
        eprintln!("skipped row at {} MHz: {}", s.frequency_mhz, s.reason);
    }
    emit(out.as_deref(), |w| {
        write_derived(&derived.rows, w, format.into())
    })
}

fn fixtures() -> Result<()> {
    let anchors = load_anchors(fixture_path(None).as_deref())?;
    emit(None, |w| write_json(&anchors, w))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Model { v, v1, v2, eta } => match (v, v1, v2) {
            (Some(v), _, _) => model(v, v, eta),
            (None, Some(a), Some(b)) => model(a, b, eta),
            _ => Err(Error::InvalidArgument(
                "model needs --v or both --v1 and --v2".into(),
            )),
        },
        Command::Analyze { cm, at } => analyze(cm, at),
        Command::SweepLoss { v, steps, out } => sweep_loss(v, steps, out),
        Command::Contours {
            metric,
            n_encoding,
            nmin_max,
            nexcess_max,
            grid,
            out,
            format,
        } => contours(metric, n_encoding, nmin_max, nexcess_max, grid, out, format),
        Command::Ingest {
            input,
            db,
            out,
            format,
        } => ingest(input, db, out, format),
        Command::Fixtures => fixtures(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
