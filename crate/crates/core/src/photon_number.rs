//! Photon-number diagram: mean sideband photon numbers of an entangled state
//! split into the photons needed to maintain the entanglement (`n_min`), to
//! bias it between amplitude and phase (`n_bias`), and to produce its
//! impurity (`n_excess`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{check_symmetric_form, CorrelationMatrix4, Quadrature, SqueezedBeam};
use crate::separability::SYMMETRIC_FORM_TOL;

/// Mean photons per bandwidth per time, by category.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonDecomposition {
    pub n_total: f64,
    pub n_pure: f64,
    pub n_min: f64,
    pub n_bias: f64,
    pub n_excess: f64,
    /// Local squeezing gain `g²` that removes the bias photons.
    pub g_bias_sq: f64,
}

/// `|α+|² + |α-|² + (V+ + V- - 2)/4`.
pub fn mean_photon_number(beam: &SqueezedBeam) -> f64 {
    let v = &beam.variances;
    beam.alpha_plus.powi(2) + beam.alpha_minus.powi(2) + 0.25 * (v.v_plus + v.v_minus - 2.0)
}

/// Photons needed to sustain entanglement of strength `insep`:
/// `(I + 1/I)/2 - 1`, written as `(1 - I)²/(2I)`.
pub fn nmin_from_insep(insep: f64) -> f64 {
    (1.0 - insep).powi(2) / (2.0 * insep)
}

/// Inverse of [`nmin_from_insep`] on `(0, 1]`:
/// `I = n + 1 - √((n+1)² - 1)`.
pub fn insep_from_nmin(n_min: f64) -> Result<f64> {
    if !(n_min >= 0.0) || !n_min.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "n_min = {n_min} must be non-negative"
        )));
    }
    // 1/(a + √(a²-1)) avoids cancellation for large n_min
    let a = n_min + 1.0;
    Ok(1.0 / (a + (n_min * (n_min + 2.0)).sqrt()))
}

/// `|⟨δX_x δX_y⟩|` of a symmetric, unbiased state: `n_excess + √((n_min+1)² - 1)`.
pub fn cross_corr_from_photons(n_min: f64, n_excess: f64) -> Result<f64> {
    if !(n_min >= 0.0 && n_excess >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "photon numbers must be non-negative (n_min = {n_min}, n_excess = {n_excess})"
        )));
    }
    Ok(n_excess + (n_min * (n_min + 2.0)).sqrt())
}

/// Symmetric, unbiased correlation matrix at `(n_min, n_excess)`, with
/// anti-correlated amplitude and correlated phase quadratures.
pub fn reconstruct_cm(n_min: f64, n_excess: f64) -> Result<CorrelationMatrix4> {
    let c = cross_corr_from_photons(n_min, n_excess)?;
    let v = n_min + n_excess + 1.0;
    CorrelationMatrix4::symmetric_form(v, v, -c, c)
}

/// Pure-state photon number after equal local squeezing with gain `g²`, for
/// recombined squeezed variances `s_plus`, `s_minus`.
pub fn pure_photons_after_squeezing(s_plus: f64, s_minus: f64, g_sq: f64) -> f64 {
    0.25 * (g_sq * s_plus + 1.0 / (g_sq * s_plus) + s_minus / g_sq + g_sq / s_minus) - 1.0
}

/// Splits the photon number of a symmetric-form state into `n_min`,
/// `n_bias` and `n_excess`. Coherent amplitudes are taken to be zero.
///
/// Separable states (`I >= 1`) have `n_min = 0`; whatever local squeezing
/// can remove is still counted as bias and the remainder as excess.
pub fn decompose(cm: &CorrelationMatrix4) -> Result<PhotonDecomposition> {
    if !check_symmetric_form(cm, SYMMETRIC_FORM_TOL) {
        return Err(Error::NotSymmetricForm);
    }
    let (p, m) = (Quadrature::Plus, Quadrature::Minus);
    let n_total = 0.25 * (cm.cxx(p) + cm.cxx(m) + cm.cyy(p) + cm.cyy(m)) - 1.0;

    let s_plus = cm.min_sum_diff_variance(p);
    let s_minus = cm.min_sum_diff_variance(m);
    if !(s_plus > 0.0 && s_minus > 0.0) {
        return Err(Error::NonPhysical(format!(
            "sum/difference variances must be positive (got {s_plus}, {s_minus})"
        )));
    }
    let insep = (s_plus * s_minus).sqrt();
    let n_pure = 0.25 * (s_plus + 1.0 / s_plus + s_minus + 1.0 / s_minus) - 1.0;
    let (rp, rm) = (s_plus.sqrt(), s_minus.sqrt());
    let n_bias = 0.25 * ((rp - rm).powi(2) + (1.0 / rp - 1.0 / rm).powi(2));
    let g_bias_sq = (s_minus / s_plus).sqrt();

    let decomposition = if insep < 1.0 {
        PhotonDecomposition {
            n_total,
            n_pure,
            n_min: nmin_from_insep(insep),
            n_bias,
            n_excess: n_total - n_pure,
            g_bias_sq,
        }
    } else {
        PhotonDecomposition {
            n_total,
            n_pure,
            n_min: 0.0,
            n_bias,
            n_excess: n_total - n_bias,
            g_bias_sq,
        }
    };
    Ok(decomposition)
}
