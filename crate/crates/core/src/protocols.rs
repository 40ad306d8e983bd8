//! Protocol efficacy on the photon-number diagram: unity-gain teleportation
//! fidelity, squeezed-state and dense-coding channel capacities, and contour
//! grids over the `n_bias = 0` plane.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::epr::epr_from_photons;
use crate::error::{Error, Result};
use crate::numeric::{golden_section_max, linspace};
use crate::photon_number::insep_from_nmin;

/// Fidelity above which the teleported state beats the no-cloning bound.
pub const NO_CLONING_FIDELITY: f64 = 2.0 / 3.0;

pub const DEFAULT_GRID_RESOLUTION: usize = 200;
pub const DEFAULT_NMIN_MAX: f64 = 3.0;
pub const DEFAULT_NEXCESS_MAX: f64 = 4.0;

/// A Gaussian channel described by signal and noise variances plus the
/// photon budget it was allotted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub signal_var: f64,
    pub noise_var: f64,
    pub n_encoding: f64,
}

impl ChannelSpec {
    pub fn new(signal_var: f64, noise_var: f64, n_encoding: f64) -> Result<Self> {
        if !(signal_var >= 0.0 && noise_var >= 0.0 && n_encoding >= 0.0) {
            return Err(Error::InvalidArgument(
                "channel variances and photon budget must be non-negative".into(),
            ));
        }
        Ok(Self {
            signal_var,
            noise_var,
            n_encoding,
        })
    }

    pub fn snr(&self) -> f64 {
        self.signal_var / self.noise_var
    }

    pub fn capacity(&self) -> f64 {
        shannon_capacity(self.snr())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeleportFidelity {
    pub fidelity: f64,
    pub no_cloning: bool,
}

/// Unity-gain coherent-state teleportation fidelity `1/(1 + I)`.
pub fn teleport_fidelity(insep: f64) -> Result<TeleportFidelity> {
    if !(insep > 0.0) || !insep.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "degree of inseparability {insep} must be positive"
        )));
    }
    let fidelity = 1.0 / (1.0 + insep);
    Ok(TeleportFidelity {
        fidelity,
        no_cloning: fidelity > NO_CLONING_FIDELITY,
    })
}

/// Bits per symbol of a band-limited Gaussian channel, `log2(1 + R)/2`.
pub fn shannon_capacity(snr: f64) -> f64 {
    0.5 * (1.0 + snr).log2()
}

/// Photons needed to squeeze one quadrature to variance `v`.
pub fn squeezed_photons(v: f64) -> f64 {
    0.25 * (v + 1.0 / v - 2.0)
}

/// Capacity of a squeezed-state channel that spends part of the budget on
/// squeezing to `v_sqz` and encodes on the squeezed quadrature with the rest.
pub fn squeezed_channel_capacity(n_encoding: f64, v_sqz: f64) -> Result<f64> {
    if !(v_sqz > 0.0 && v_sqz <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "squeezed variance {v_sqz} must lie in (0, 1]"
        )));
    }
    let n_sqz = squeezed_photons(v_sqz);
    if !(n_encoding >= n_sqz) {
        return Err(Error::InsufficientBudget {
            budget: n_encoding,
            required: n_sqz,
        });
    }
    let channel = ChannelSpec::new(4.0 * (n_encoding - n_sqz), v_sqz, n_encoding)?;
    Ok(channel.capacity())
}

/// Best squeezed-state capacity for a photon budget, `log2(1 + 2n)`.
pub fn optimal_squeezed_capacity(n_encoding: f64) -> f64 {
    (1.0 + 2.0 * n_encoding).log2()
}

/// Numeric maximization of [`squeezed_channel_capacity`] over the squeezed
/// variance. Returns `(v_opt, capacity)`.
pub fn optimal_squeezed_capacity_numeric(n_encoding: f64) -> Result<(f64, f64)> {
    if !(n_encoding >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "photon budget {n_encoding} must be non-negative"
        )));
    }
    // smallest variance the whole budget can buy: v + 1/v = 4n + 2
    let b = 4.0 * n_encoding + 2.0;
    let v_min = 2.0 / (b + (b * b - 4.0).sqrt());
    if v_min >= 1.0 {
        return Ok((1.0, squeezed_channel_capacity(n_encoding, 1.0)?));
    }
    let f = |v: f64| squeezed_channel_capacity(n_encoding, v).unwrap_or(f64::NEG_INFINITY);
    let (lo, hi) = (v_min.ln(), 0.0);
    let (x, c) = golden_section_max(|x| f(x.exp()), lo, hi, 1e-13);
    Ok((x.exp(), c))
}

/// Dense-coding capacity over both quadrature channels of a symmetric,
/// unbiased entangled state.
pub fn dense_coding_capacity(n_encoding: f64, n_min: f64, n_excess: f64) -> Result<f64> {
    let insep = insep_from_nmin(n_min)?;
    if !(n_excess >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "n_excess = {n_excess} must be non-negative"
        )));
    }
    let half_total = 0.5 * (n_min + n_excess);
    if !(n_encoding >= half_total) {
        return Err(Error::InsufficientBudget {
            budget: n_encoding,
            required: half_total,
        });
    }
    // two quadrature channels, each log2(1 + S/I)/2
    let channel = ChannelSpec::new(n_encoding - half_total, insep, n_encoding)?;
    Ok(2.0 * channel.capacity())
}

/// Dense-coding capacity relative to the optimal squeezed-state capacity.
pub fn capacity_ratio(n_encoding: f64, n_min: f64, n_excess: f64) -> Result<f64> {
    if !(n_encoding > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "photon budget {n_encoding} must be positive for a capacity ratio"
        )));
    }
    Ok(dense_coding_capacity(n_encoding, n_min, n_excess)? / optimal_squeezed_capacity(n_encoding))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Epr,
    Fidelity,
    DenseRatio,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "epr" => Ok(Metric::Epr),
            "fidelity" => Ok(Metric::Fidelity),
            "dense_ratio" | "dense-ratio" => Ok(Metric::DenseRatio),
            _ => Err(Error::UnknownToken {
                token: s.to_string(),
                expected: "epr, fidelity, dense_ratio",
            }),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Epr => "epr",
            Metric::Fidelity => "fidelity",
            Metric::DenseRatio => "dense_ratio",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    /// Photon budget; required for [`Metric::DenseRatio`].
    pub n_encoding: Option<f64>,
}

/// Metric values sampled over the `n_min`–`n_excess` plane.
///
/// `values[i][j]` belongs to `nmin_axis[i]`, `nexcess_axis[j]`. Nodes where
/// the metric is undefined (photon budget exhausted) hold `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourGrid {
    pub metric: Metric,
    pub params: GridParams,
    pub nmin_axis: Vec<f64>,
    pub nexcess_axis: Vec<f64>,
    pub values: Vec<Vec<Option<f64>>>,
}

fn evaluate(metric: Metric, n_encoding: f64, n_min: f64, n_excess: f64) -> Option<f64> {
    match metric {
        Metric::Epr => epr_from_photons(n_min, n_excess).ok(),
        Metric::Fidelity => insep_from_nmin(n_min)
            .and_then(teleport_fidelity)
            .map(|f| f.fidelity)
            .ok(),
        Metric::DenseRatio => capacity_ratio(n_encoding, n_min, n_excess).ok(),
    }
}

fn check_range(name: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if lo >= 0.0 && hi > lo && hi.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} range [{lo}, {hi}] must be non-negative and increasing"
        )))
    }
}

/// Samples `metric` on a `resolution.0 × resolution.1` grid. Rows are
/// evaluated in parallel; the table layout does not depend on scheduling.
pub fn contour_grid(
    metric: Metric,
    nmin_range: (f64, f64),
    nexcess_range: (f64, f64),
    resolution: (usize, usize),
    params: GridParams,
) -> Result<ContourGrid> {
    check_range("n_min", nmin_range)?;
    check_range("n_excess", nexcess_range)?;
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution {resolution:?} must be at least 2 in each direction"
        )));
    }
    let n_encoding = match (metric, params.n_encoding) {
        (Metric::DenseRatio, None) => {
            return Err(Error::InvalidArgument(
                "dense_ratio needs a photon budget (n_encoding)".into(),
            ))
        }
        (_, Some(n)) if !(n > 0.0) => {
            return Err(Error::InvalidArgument(format!(
                "n_encoding = {n} must be positive"
            )))
        }
        (_, n) => n.unwrap_or(0.0),
    };
    let nmin_axis = linspace(nmin_range.0, nmin_range.1, resolution.0);
    let nexcess_axis = linspace(nexcess_range.0, nexcess_range.1, resolution.1);
    let values = nmin_axis
        .par_iter()
        .map(|&n_min| {
            nexcess_axis
                .iter()
                .map(|&n_excess| evaluate(metric, n_encoding, n_min, n_excess))
                .collect()
        })
        .collect();
    Ok(ContourGrid {
        metric,
        params,
        nmin_axis,
        nexcess_axis,
        values,
    })
}

impl ContourGrid {
    pub fn value_at(&self, i: usize, j: usize) -> Option<f64> {
        self.values.get(i)?.get(j).copied().flatten()
    }

    /// Long-format CSV with columns `n_min,n_excess,value`; undefined nodes
    /// are written as `nan`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n_min,n_excess,value")?;
        for (i, n_min) in self.nmin_axis.iter().enumerate() {
            for (j, n_excess) in self.nexcess_axis.iter().enumerate() {
                match self.values[i][j] {
                    Some(v) => writeln!(out, "{n_min},{n_excess},{v}")?,
                    None => writeln!(out, "{n_min},{n_excess},nan")?,
                }
            }
        }
        Ok(())
    }
}
