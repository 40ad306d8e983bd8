//! EPR paradox criterion: conditional variances and the degree of EPR paradox.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{CorrelationMatrix4, Quadrature};
use crate::numeric::golden_section_min;
use crate::photon_number::insep_from_nmin;

/// Bracket for the numeric gain search.
pub const GAIN_SEARCH_RANGE: (f64, f64) = (-10.0, 10.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalVariance {
    pub variance: f64,
    /// Optimal inference gain `g` minimizing `⟨(δX_x - g δX_y)²⟩`.
    pub gain: f64,
}

/// Both conditional variances and their product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EprReport {
    pub cv_plus: f64,
    pub cv_minus: f64,
    pub g_plus: f64,
    pub g_minus: f64,
    /// Degree of EPR paradox; below 1 the paradox is demonstrated.
    pub degree: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EprAsymptotes {
    /// Limit for vanishing excess photons, `4I²/(I²+1)²`.
    pub pure_limit: f64,
    /// Limit for unbounded excess photons, `4I²`.
    pub impure_limit: f64,
}

fn inference_residual(cm: &CorrelationMatrix4, q: Quadrature, g: f64) -> f64 {
    cm.cxx(q) - 2.0 * g * cm.cxy(q) + g * g * cm.cyy(q)
}

/// `Δ²X_{x|y} = Δ²X_x - |⟨δX_x δX_y⟩|² / Δ²X_y`, with gain `C_xy / C_yy`.
pub fn conditional_variance(cm: &CorrelationMatrix4, q: Quadrature) -> Result<ConditionalVariance> {
    let cyy = cm.cyy(q);
    if cyy <= 0.0 {
        return Err(Error::InvalidMatrix(format!(
            "conditioning variance of beam y is {cyy}"
        )));
    }
    let cxy = cm.cxy(q);
    let cv = ConditionalVariance {
        variance: cm.cxx(q) - cxy * cxy / cyy,
        gain: cxy / cyy,
    };
    debug_assert!(
        cv.gain.abs() >= GAIN_SEARCH_RANGE.1
            || (conditional_variance_numeric(cm, q).variance - cv.variance).abs()
                <= 1e-9 * cm.cxx(q).max(1.0),
        "closed-form conditional variance disagrees with numeric minimization"
    );
    Ok(cv)
}

/// Golden-section minimization of `⟨(δX_x - g δX_y)²⟩` over the gain.
pub fn conditional_variance_numeric(cm: &CorrelationMatrix4, q: Quadrature) -> ConditionalVariance {
    let (gain, variance) = golden_section_min(
        |g| inference_residual(cm, q, g),
        GAIN_SEARCH_RANGE.0,
        GAIN_SEARCH_RANGE.1,
        1e-12,
    );
    ConditionalVariance { variance, gain }
}

pub fn degree_of_epr(cm: &CorrelationMatrix4) -> Result<EprReport> {
    let plus = conditional_variance(cm, Quadrature::Plus)?;
    let minus = conditional_variance(cm, Quadrature::Minus)?;
    Ok(EprReport {
        cv_plus: plus.variance,
        cv_minus: minus.variance,
        g_plus: plus.gain,
        g_minus: minus.gain,
        degree: plus.variance * minus.variance,
    })
}

/// Degree of EPR paradox after equal loss `1 - η` on both beams of a state
/// made from two pure, equally squeezed beams.
pub fn epr_vs_loss(v_ave: f64, eta: f64) -> f64 {
    let anti = v_ave + 1.0 / v_ave - 2.0;
    let inner = 1.0 - eta + (2.0 * eta - 1.0) / (eta * anti + 2.0);
    4.0 * inner * inner
}

/// Degree of EPR paradox of a symmetric, unbiased state located at
/// `(n_min, n_excess)` on the photon-number diagram.
pub fn epr_from_photons(n_min: f64, n_excess: f64) -> Result<f64> {
    if !(n_min >= 0.0 && n_excess >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "photon numbers must be non-negative (n_min = {n_min}, n_excess = {n_excess})"
        )));
    }
    let i = insep_from_nmin(n_min)?;
    let r = (2.0 * n_excess * i + 1.0) / (n_excess + n_min + 1.0);
    Ok(r * r)
}

/// Degree of EPR paradox in the pure and infinitely impure limits, as a
/// function of the degree of inseparability.
pub fn epr_asymptotes(insep: f64) -> EprAsymptotes {
    let i2 = insep * insep;
    EprAsymptotes {
        pure_limit: 4.0 * i2 / ((i2 + 1.0) * (i2 + 1.0)),
        impure_limit: 4.0 * i2,
    }
}
