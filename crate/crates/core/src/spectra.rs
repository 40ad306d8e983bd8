//! Frequency spectra of quadrature variances: CSV ingestion, per-frequency
//! correlation-matrix reconstruction, derived metric spectra, a synthetic
//! spectrum model, and output writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::epr::degree_of_epr;
use crate::error::{Error, Result};
use crate::gaussian::{
    apply_loss, entangle_on_beamsplitter, Combination, CorrelationMatrix4, Quadrature, SqueezedBeam,
};
use crate::photon_number::decompose;
use crate::separability::degree_of_inseparability;

/// Column names of the spectra CSV, in order.
pub const SPECTRUM_COLUMNS: [&str; 7] = [
    "frequency_mhz",
    "vx_plus",
    "vx_minus",
    "vy_plus",
    "vy_minus",
    "v_sum_plus",
    "v_diff_minus",
];

/// Column names of the derived-spectrum CSV, in order.
pub const DERIVED_COLUMNS: [&str; 9] = [
    "frequency_mhz",
    "inseparability",
    "epr",
    "n_min",
    "n_bias",
    "n_excess",
    "n_total",
    "c_xy_plus",
    "c_xy_minus",
];

/// Measured variances at one sideband frequency (linear, shot noise = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub frequency_mhz: f64,
    pub vx_plus: f64,
    pub vx_minus: f64,
    pub vy_plus: f64,
    pub vy_minus: f64,
    /// Amplitude-quadrature sum variance `Δ²X+_{x+y}`.
    pub v_sum_plus: f64,
    /// Phase-quadrature difference variance `Δ²X-_{x-y}`.
    pub v_diff_minus: f64,
}

impl SpectrumRow {
    fn values(&self) -> [f64; 7] {
        [
            self.frequency_mhz,
            self.vx_plus,
            self.vx_minus,
            self.vy_plus,
            self.vy_minus,
            self.v_sum_plus,
            self.v_diff_minus,
        ]
    }
}

/// Metrics derived from one [`SpectrumRow`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedRow {
    pub frequency_mhz: f64,
    pub inseparability: f64,
    pub epr: f64,
    pub n_min: f64,
    pub n_bias: f64,
    pub n_excess: f64,
    pub n_total: f64,
    pub c_xy_plus: f64,
    pub c_xy_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRow {
    pub frequency_mhz: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DerivedSpectra {
    pub rows: Vec<DerivedRow>,
    pub skipped: Vec<SkippedRow>,
}

/// Units of the variance columns of an input spectrum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Units {
    #[default]
    Linear,
    /// `10 log10` of the linear variance.
    Db,
}

impl Units {
    fn to_linear(self, v: f64) -> f64 {
        match self {
            Units::Linear => v,
            Units::Db => 10f64.powf(v / 10.0),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::UnknownToken {
                token: s.to_string(),
                expected: "csv, json",
            }),
        }
    }
}

/// Parses a spectra CSV. Columns are located by header name; extra columns
/// are ignored. Rows come back sorted by frequency. Errors name the file
/// line and the offending column.
pub fn parse_spectra(text: &str, units: Units) -> Result<Vec<SpectrumRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let mut index = [0usize; 7];
    for (slot, name) in index.iter_mut().zip(SPECTRUM_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse {
                row: 1,
                column: name.to_string(),
                message: "missing column in header".into(),
            })?;
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let mut values = [0.0; 7];
        for (k, (&col, name)) in index.iter().zip(SPECTRUM_COLUMNS).enumerate() {
            let cell = record.get(col).ok_or_else(|| Error::Parse {
                row: line,
                column: name.to_string(),
                message: "missing cell".into(),
            })?;
            let raw: f64 = cell.parse().map_err(|_| Error::Parse {
                row: line,
                column: name.to_string(),
                message: format!("'{cell}' is not a number"),
            })?;
            let v = if k == 0 { raw } else { units.to_linear(raw) };
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Parse {
                    row: line,
                    column: name.to_string(),
                    message: format!("value {raw} must be positive"),
                });
            }
            values[k] = v;
        }
        rows.push(SpectrumRow {
            frequency_mhz: values[0],
            vx_plus: values[1],
            vx_minus: values[2],
            vy_plus: values[3],
            vy_minus: values[4],
            v_sum_plus: values[5],
            v_diff_minus: values[6],
        });
    }
    rows.sort_by(|a, b| a.frequency_mhz.total_cmp(&b.frequency_mhz));
    Ok(rows)
}

/// Writes rows in the spectra CSV layout accepted by [`parse_spectra`].
pub fn write_spectra_csv<W: Write>(rows: &[SpectrumRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(SPECTRUM_COLUMNS)?;
    for row in rows {
        w.write_record(row.values().iter().map(|v| v.to_string()))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Symmetric-form correlation matrix at one frequency. Mode variances are
/// averaged over the two beams and the same-quadrature correlations are
/// chosen so the sum/difference variances reproduce the row.
pub fn cm_at_frequency(row: &SpectrumRow) -> Result<CorrelationMatrix4> {
    let c_plus = 0.5 * (row.vx_plus + row.vy_plus);
    let c_minus = 0.5 * (row.vx_minus + row.vy_minus);
    CorrelationMatrix4::symmetric_form(
        c_plus,
        c_minus,
        row.v_sum_plus - c_plus,
        c_minus - row.v_diff_minus,
    )
}

/// Inverse of [`cm_at_frequency`] for symmetric matrices.
pub fn row_from_cm(frequency_mhz: f64, cm: &CorrelationMatrix4) -> SpectrumRow {
    SpectrumRow {
        frequency_mhz,
        vx_plus: cm.cxx(Quadrature::Plus),
        vx_minus: cm.cxx(Quadrature::Minus),
        vy_plus: cm.cyy(Quadrature::Plus),
        vy_minus: cm.cyy(Quadrature::Minus),
        v_sum_plus: cm.sum_diff_variance(Quadrature::Plus, Combination::Sum),
        v_diff_minus: cm.sum_diff_variance(Quadrature::Minus, Combination::Diff),
    }
}

pub fn derive_row(row: &SpectrumRow) -> Result<DerivedRow> {
    let cm = cm_at_frequency(row)?;
    let photons = decompose(&cm)?;
    Ok(DerivedRow {
        frequency_mhz: row.frequency_mhz,
        inseparability: degree_of_inseparability(&cm)?,
        epr: degree_of_epr(&cm)?.degree,
        n_min: photons.n_min,
        n_bias: photons.n_bias,
        n_excess: photons.n_excess,
        n_total: photons.n_total,
        c_xy_plus: cm.cxy(Quadrature::Plus),
        c_xy_minus: cm.cxy(Quadrature::Minus),
    })
}

/// Derives metrics for every row; rows that fail are skipped and reported.
pub fn derive_spectra(rows: &[SpectrumRow]) -> DerivedSpectra {
    let mut out = DerivedSpectra::default();
    for row in rows {
        match derive_row(row) {
            Ok(d) => out.rows.push(d),
            Err(e) => out.skipped.push(SkippedRow {
                frequency_mhz: row.frequency_mhz,
                reason: e.to_string(),
            }),
        }
    }
    out
}

/// Parameters of the synthetic (qualitative) spectrum model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisParams {
    /// Squeezed variance of each input beam at zero frequency.
    pub v_floor: f64,
    /// Half-width of the squeezing roll-off.
    pub opa_bandwidth_mhz: f64,
    /// Centre of the laser relaxation-oscillation noise peak.
    pub relax_osc_mhz: f64,
    /// Peak excess noise added to the amplitude sum channel.
    pub relax_amplitude: f64,
    /// Detection efficiency applied to both beams.
    pub eta: f64,
    pub freq_grid: Vec<f64>,
}

impl Default for SynthesisParams {
    fn default() -> Self {
        Self {
            v_floor: 0.35,
            opa_bandwidth_mhz: 15.0,
            relax_osc_mhz: 1.0,
            relax_amplitude: 3.0,
            eta: 0.85,
            freq_grid: (0..=75).map(|i| 2.5 + 0.1 * i as f64).collect(),
        }
    }
}

impl SynthesisParams {
    /// Input squeezed variance at frequency `f`.
    pub fn squeezing(&self, f: f64) -> f64 {
        1.0 - (1.0 - self.v_floor) / (1.0 + (f / self.opa_bandwidth_mhz).powi(2))
    }

    /// Common-mode amplitude noise at frequency `f`.
    pub fn relaxation_noise(&self, f: f64) -> f64 {
        let detune = (f - self.relax_osc_mhz) / self.relax_osc_mhz;
        self.relax_amplitude / (1.0 + detune * detune)
    }
}

/// Synthetic spectra: two pure amplitude-squeezed beams with Lorentzian
/// squeezing roll-off, interfered on the beam splitter, attenuated by `eta`,
/// plus relaxation-oscillation noise common to both amplitude quadratures.
/// The common-mode noise raises the amplitude sum variance and cancels in
/// the phase difference variance.
pub fn synthesize_spectra(params: &SynthesisParams) -> Result<Vec<SpectrumRow>> {
    let p = params;
    if !(p.v_floor > 0.0 && p.v_floor <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "v_floor {} must lie in (0, 1]",
            p.v_floor
        )));
    }
    if !(p.opa_bandwidth_mhz > 0.0 && p.relax_osc_mhz > 0.0 && p.relax_amplitude >= 0.0) {
        return Err(Error::InvalidArgument(
            "bandwidth and relaxation frequency must be positive, amplitude non-negative".into(),
        ));
    }
    let mut rows = Vec::with_capacity(p.freq_grid.len());
    for &f in &p.freq_grid {
        if !(f > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "frequency {f} must be positive"
            )));
        }
        let beam = SqueezedBeam::pure_amplitude_squeezed(p.squeezing(f))?;
        let state = apply_loss(&entangle_on_beamsplitter(&beam, &beam)?, p.eta, p.eta)?;
        let half_noise = 0.5 * p.relaxation_noise(f);
        let mut m = *state.cm.matrix();
        for (i, j) in [(0, 0), (2, 2), (0, 2), (2, 0)] {
            m[(i, j)] += half_noise;
        }
        rows.push(row_from_cm(f, &CorrelationMatrix4::from_matrix(m)?));
    }
    Ok(rows)
}

/// Writes derived rows as CSV (header first, even when empty) or as a JSON
/// array. Column order follows [`DERIVED_COLUMNS`].
pub fn write_derived<W: Write>(
    rows: &[DerivedRow],
    mut out: W,
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out);
            w.write_record(DERIVED_COLUMNS)?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush().map_err(csv::Error::from)?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out).map_err(csv::Error::from)?;
        }
    }
    Ok(())
}

/// [`write_derived`] to a file; I/O failures carry the path.
pub fn write_outputs(rows: &[DerivedRow], path: &Path, format: OutputFormat) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut buf = BufWriter::new(file);
    write_derived(rows, &mut buf, format).map_err(|e| match e {
        Error::Csv(c) if c.is_io_error() => Error::io(path, std::io::Error::other(c.to_string())),
        other => other,
    })?;
    buf.flush().map_err(|e| Error::io(path, e))
}
