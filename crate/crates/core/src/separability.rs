//! Inseparability of two-mode Gaussian states: the bias parameter `k`, the
//! sum and product forms of the inseparability criterion, the standard-form
//! restrictions that make them applicable, and the degree of inseparability.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{check_symmetric_form, CorrelationMatrix4, Quadrature};

/// Absolute tolerance on the restriction equalities; matches the ±0.05
/// statistical error of the measured matrix elements.
pub const RESTRICTION_TOL: f64 = 0.05;
/// Relative tolerance on the equality of the two bias ratios.
pub const BIAS_RATIO_REL_TOL: f64 = 1e-3;
/// Allowed disagreement between the amplitude and phase expressions for `k`.
pub const K_AGREEMENT_TOL: f64 = 1e-6;
/// Tolerance used to decide whether a matrix takes the symmetric shortcut.
pub const SYMMETRIC_FORM_TOL: f64 = 1e-9;

/// Outcome of the sum criterion `Δ²X_I+ + Δ²X_I- < 2(k² + 1/k²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumCriterion {
    pub k: f64,
    pub sum_lhs: f64,
    pub sum_rhs: f64,
    /// Strict inequality holds. Reported even when not applicable, since
    /// satisfaction for any `k` already implies entanglement.
    pub satisfied: bool,
    /// Both standard-form restrictions hold, so the criterion is also necessary.
    pub applicable: bool,
    /// A same-quadrature correlation was exactly zero and its sign defaulted to +1.
    pub sign_defaulted: bool,
}

/// Standard-form restriction check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardFormRestrictions {
    /// `(C++xx - 1)/(C++yy - 1) = (C--xx - 1)/(C--yy - 1)`.
    pub bias_ratio_ok: bool,
    /// `√((C++xx-1)(C++yy-1)) - |C++xy|` equals its phase-quadrature analogue.
    pub correlation_offset_ok: bool,
    /// Set when the restrictions are undefined for this matrix.
    pub diagnostic: Option<String>,
}

impl StandardFormRestrictions {
    pub fn both(&self) -> bool {
        self.bias_ratio_ok && self.correlation_offset_ok
    }
}

/// Flat summary of the inseparability analysis of one matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InseparabilityReport {
    pub k: f64,
    pub sum_lhs: f64,
    pub sum_rhs: f64,
    pub sum_satisfied: bool,
    pub sum_applicable: bool,
    pub product_applicable: bool,
    /// Degree of inseparability; the beams are entangled iff it is below 1.
    pub degree: f64,
}

/// `(C - 1)` excesses over shot noise, in the order `(xx+, yy+, xx-, yy-)`.
fn excess_noise(cm: &CorrelationMatrix4) -> [f64; 4] {
    let (p, m) = (Quadrature::Plus, Quadrature::Minus);
    [
        cm.cxx(p) - 1.0,
        cm.cyy(p) - 1.0,
        cm.cxx(m) - 1.0,
        cm.cyy(m) - 1.0,
    ]
}

/// Bias parameter `k = ((C++yy - 1)/(C++xx - 1))^¼`, required to agree with
/// the phase-quadrature expression.
pub fn k_parameter(cm: &CorrelationMatrix4) -> Result<f64> {
    let [xp, yp, xm, ym] = excess_noise(cm);
    if let Some(bad) = [xp, yp, xm, ym].iter().find(|e| **e <= 0.0) {
        return Err(Error::Degenerate(format!(
            "a diagonal entry exceeds shot noise by {bad}"
        )));
    }
    let k_plus = (yp / xp).powf(0.25);
    let k_minus = (ym / xm).powf(0.25);
    if (k_plus - k_minus).abs() > K_AGREEMENT_TOL {
        return Err(Error::InconsistentBias { k_plus, k_minus });
    }
    Ok(k_plus)
}

/// `k` from [`k_parameter`] when defined; otherwise 1, which is the value any
/// symmetric matrix takes and a valid free choice for the sufficient test.
pub fn effective_k(cm: &CorrelationMatrix4) -> f64 {
    if check_symmetric_form(cm, SYMMETRIC_FORM_TOL) {
        return 1.0;
    }
    k_parameter(cm).unwrap_or(1.0)
}

/// `Δ²X_I = ⟨(k δX_x - sgn(C_xy) δX_y / k)²⟩` expanded from matrix entries.
///
/// Returns the variance and whether the sign of `C_xy` had to be defaulted.
pub fn correlation_variance(cm: &CorrelationMatrix4, q: Quadrature, k: f64) -> (f64, bool) {
    let cxy = cm.cxy(q);
    let k2 = k * k;
    let v = k2 * cm.cxx(q) + cm.cyy(q) / k2 - 2.0 * cxy.abs();
    (v, cxy == 0.0)
}

/// Sum form of the inseparability criterion. When `k` is `None` it is taken
/// from [`k_parameter`] (or 1 for symmetric matrices).
pub fn duan_sum_criterion(cm: &CorrelationMatrix4, k: Option<f64>) -> Result<SumCriterion> {
    let k = match k {
        Some(k) if k.is_finite() && k > 0.0 => k,
        Some(k) => return Err(Error::InvalidArgument(format!("k = {k} must be positive"))),
        None if check_symmetric_form(cm, SYMMETRIC_FORM_TOL) => 1.0,
        None => k_parameter(cm)?,
    };
    let (vp, dp) = correlation_variance(cm, Quadrature::Plus, k);
    let (vm, dm) = correlation_variance(cm, Quadrature::Minus, k);
    let sum_lhs = vp + vm;
    let sum_rhs = 2.0 * (k * k + 1.0 / (k * k));
    Ok(SumCriterion {
        k,
        sum_lhs,
        sum_rhs,
        satisfied: sum_lhs < sum_rhs,
        applicable: standard_form_restrictions(cm).both(),
        sign_defaulted: dp || dm,
    })
}

pub fn standard_form_restrictions(cm: &CorrelationMatrix4) -> StandardFormRestrictions {
    standard_form_restrictions_with_tol(cm, BIAS_RATIO_REL_TOL, RESTRICTION_TOL)
}

pub fn standard_form_restrictions_with_tol(
    cm: &CorrelationMatrix4,
    ratio_rel_tol: f64,
    offset_abs_tol: f64,
) -> StandardFormRestrictions {
    let [xp, yp, xm, ym] = excess_noise(cm);
    if [xp, yp, xm, ym].iter().any(|e| *e <= 0.0) {
        return StandardFormRestrictions {
            bias_ratio_ok: false,
            correlation_offset_ok: false,
            diagnostic: Some(
                "restriction undefined: a diagonal entry is at or below shot noise".into(),
            ),
        };
    }
    let r_plus = xp / yp;
    let r_minus = xm / ym;
    let bias_ratio_ok = (r_plus - r_minus).abs() <= ratio_rel_tol * r_plus.abs().max(r_minus.abs());

    let off_plus = (xp * yp).sqrt() - cm.cxy(Quadrature::Plus).abs();
    let off_minus = (xm * ym).sqrt() - cm.cxy(Quadrature::Minus).abs();
    let correlation_offset_ok = (off_plus - off_minus).abs() <= offset_abs_tol;

    StandardFormRestrictions {
        bias_ratio_ok,
        correlation_offset_ok,
        diagnostic: None,
    }
}

/// The single restriction under which the product form of the criterion is
/// valid, evaluated with [`effective_k`] and [`RESTRICTION_TOL`].
pub fn product_restriction(cm: &CorrelationMatrix4) -> bool {
    product_restriction_with(cm, effective_k(cm), RESTRICTION_TOL)
}

pub fn product_restriction_with(cm: &CorrelationMatrix4, k: f64, tol: f64) -> bool {
    let (p, m) = (Quadrature::Plus, Quadrature::Minus);
    let (vp, _) = correlation_variance(cm, p, k);
    let (vm, _) = correlation_variance(cm, m, k);
    if !(vp > 0.0 && vm > 0.0) {
        return false;
    }
    let lhs = cm.cyy(p) * cm.cxx(m) - cm.cxx(p) * cm.cyy(m);
    let rhs =
        (vm / vp).sqrt() * (cm.cyy(p) - cm.cxx(p)) + (vp / vm).sqrt() * (cm.cxx(m) - cm.cyy(m));
    (lhs - rhs).abs() <= tol
}

/// Degree of inseparability.
///
/// Symmetric matrices use `√(Δ²X+_{x±y} Δ²X-_{x±y})` with the smaller of the
/// sum and difference variance in each quadrature. Other block-form matrices
/// use `√(Δ²X_I+ Δ²X_I-)/(k² + 1/k²)` with `k` from [`k_parameter`].
pub fn degree_of_inseparability(cm: &CorrelationMatrix4) -> Result<f64> {
    if check_symmetric_form(cm, SYMMETRIC_FORM_TOL) {
        let vp = cm.min_sum_diff_variance(Quadrature::Plus);
        let vm = cm.min_sum_diff_variance(Quadrature::Minus);
        if !(vp > 0.0 && vm > 0.0) {
            return Err(Error::NonPhysical(format!(
                "sum/difference variances must be positive (got {vp}, {vm})"
            )));
        }
        return Ok((vp * vm).sqrt());
    }
    let k = k_parameter(cm)?;
    let (vp, _) = correlation_variance(cm, Quadrature::Plus, k);
    let (vm, _) = correlation_variance(cm, Quadrature::Minus, k);
    if !(vp > 0.0 && vm > 0.0) {
        return Err(Error::NonPhysical(format!(
            "correlation variances must be positive (got {vp}, {vm})"
        )));
    }
    Ok((vp * vm).sqrt() / (k * k + 1.0 / (k * k)))
}

pub fn inseparability_report(cm: &CorrelationMatrix4) -> Result<InseparabilityReport> {
    let k = if check_symmetric_form(cm, SYMMETRIC_FORM_TOL) {
        1.0
    } else {
        k_parameter(cm)?
    };
    let sum = duan_sum_criterion(cm, Some(k))?;
    Ok(InseparabilityReport {
        k,
        sum_lhs: sum.sum_lhs,
        sum_rhs: sum.sum_rhs,
        sum_satisfied: sum.satisfied,
        sum_applicable: sum.applicable,
        product_applicable: product_restriction_with(cm, k, RESTRICTION_TOL),
        degree: degree_of_inseparability(cm)?,
    })
}

/// Degree of inseparability after equal loss on both beams of a state made
/// from two equally squeezed beams with average squeezed variance `v_ave`.
pub fn inseparability_vs_loss(v_ave: f64, eta: f64) -> f64 {
    eta * v_ave + (1.0 - eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at_3_5mhz() -> CorrelationMatrix4 {
        CorrelationMatrix4::symmetric_form(6.2, 6.1, -5.3, 5.7).unwrap()
    }

    fn at_6_5mhz() -> CorrelationMatrix4 {
        CorrelationMatrix4::symmetric_form(3.3, 3.3, -2.9, 2.9).unwrap()
    }

    #[test]
    fn k_is_one_for_symmetric_states() {
        assert!((k_parameter(&at_6_5mhz()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn k_for_biased_state() {
        let cm = CorrelationMatrix4::block_form(2.0, 5.0, 3.0, 9.0, -1.0, 1.0).unwrap();
        let k = k_parameter(&cm).unwrap();
        assert!((k - 4f64.powf(0.25)).abs() < 1e-12);
        assert!((k - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn k_errors() {
        assert!(matches!(
            k_parameter(&CorrelationMatrix4::identity()),
            Err(Error::Degenerate(_))
        ));
        let cm = CorrelationMatrix4::block_form(2.0, 3.0, 2.0, 2.0, -0.5, 0.5).unwrap();
        assert!(matches!(
            k_parameter(&cm),
            Err(Error::InconsistentBias { .. })
        ));
    }

    #[test]
    fn sum_criterion_anchor() {
        let s = duan_sum_criterion(&at_6_5mhz(), Some(1.0)).unwrap();
        assert!((s.sum_lhs - 1.6).abs() < 1e-12);
        assert_eq!(s.sum_rhs, 4.0);
        assert!(s.satisfied && s.applicable);
    }

    #[test]
    fn sum_criterion_vacuum_is_not_satisfied() {
        let s = duan_sum_criterion(&CorrelationMatrix4::identity(), Some(1.0)).unwrap();
        assert_eq!(s.sum_lhs, 4.0);
        assert_eq!(s.sum_rhs, 4.0);
        assert!(!s.satisfied);
        assert!(s.sign_defaulted);
    }

    #[test]
    fn sum_criterion_low_frequency_anchor() {
        let s = duan_sum_criterion(&at_3_5mhz(), Some(1.0)).unwrap();
        assert!(s.satisfied);
        assert!(!s.applicable);
    }

    #[test]
    fn restrictions_truth_table() {
        let r60 = standard_form_restrictions(&at_6_5mhz());
        assert!(r60.bias_ratio_ok && r60.correlation_offset_ok);
        let r59 = standard_form_restrictions(&at_3_5mhz());
        assert!(r59.bias_ratio_ok && !r59.correlation_offset_ok);
        let vac = standard_form_restrictions(&CorrelationMatrix4::identity());
        assert!(!vac.bias_ratio_ok && !vac.correlation_offset_ok);
        assert!(vac.diagnostic.is_some());
    }

    #[test]
    fn product_restriction_cases() {
        assert!(product_restriction(&at_6_5mhz()));
        assert!(product_restriction(&at_3_5mhz()));
        // lhs = 3·2 - 2·2 = 2; rhs = √(3/4)·1 ≈ 0.866 at k = 1
        let cm = CorrelationMatrix4::block_form(2.0, 3.0, 2.0, 2.0, -0.5, 0.5).unwrap();
        assert!(!product_restriction(&cm));
    }

    #[test]
    fn degree_anchors() {
        assert!((degree_of_inseparability(&at_6_5mhz()).unwrap() - 0.4).abs() < 1e-12);
        assert!((degree_of_inseparability(&at_3_5mhz()).unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(
            degree_of_inseparability(&CorrelationMatrix4::identity()).unwrap(),
            1.0
        );
    }

    #[test]
    fn degree_general_path_reduces_to_symmetric() {
        // A symmetric state with tiny asymmetry follows the general formula and
        // must land next to the symmetric value.
        let cm =
            CorrelationMatrix4::block_form(3.3, 3.3 + 1e-6, 3.3, 3.3 + 1e-6, -2.9, 2.9).unwrap();
        let i = degree_of_inseparability(&cm).unwrap();
        assert!((i - 0.4).abs() < 1e-5, "{i}");
    }

    #[test]
    fn loss_closed_form() {
        assert_eq!(inseparability_vs_loss(0.5, 1.0), 0.5);
        assert_eq!(inseparability_vs_loss(0.5, 0.5), 0.75);
        assert_eq!(inseparability_vs_loss(0.123, 0.0), 1.0);
    }

    #[test]
    fn report_serializes_flat() {
        let r = inseparability_report(&at_6_5mhz()).unwrap();
        let v: serde_json::Value = serde_json::to_value(r).unwrap();
        for key in [
            "k",
            "sum_lhs",
            "sum_rhs",
            "sum_applicable",
            "product_applicable",
            "degree",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!((r.degree - 0.4).abs() < 1e-12);
    }
}
