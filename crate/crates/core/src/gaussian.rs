//! One- and two-mode Gaussian states in the quadrature picture.
//!
//! All variances are linear and normalized so that the vacuum (shot noise)
//! has variance 1. Quadratures are ordered `(X+_x, X-_x, X+_y, X-_y)`: amplitude
//! then phase for beam `x`, then the same for beam `y`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, SMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on the uncertainty product `V+ V- >= 1`.
pub const UNCERTAINTY_TOL: f64 = 1e-9;
/// Slack allowed on the smallest eigenvalue of `CM + iΩ`.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Maximum asymmetry `|C_ij - C_ji|` accepted on construction.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Row/column labels of a [`CorrelationMatrix4`], as written in JSON.
pub const ORDER: [&str; 4] = ["xp", "xm", "yp", "ym"];

/// Amplitude (`+`) or phase (`-`) quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    Plus,
    Minus,
}

impl Quadrature {
    pub const BOTH: [Quadrature; 2] = [Quadrature::Plus, Quadrature::Minus];

    pub fn x_index(self) -> usize {
        match self {
            Quadrature::Plus => 0,
            Quadrature::Minus => 1,
        }
    }

    pub fn y_index(self) -> usize {
        self.x_index() + 2
    }
}

impl FromStr for Quadrature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "+" | "plus" | "amplitude" | "p" => Ok(Quadrature::Plus),
            "-" | "minus" | "phase" | "m" => Ok(Quadrature::Minus),
            _ => Err(Error::UnknownToken {
                token: s.to_string(),
                expected: "+, -, plus, minus, amplitude, phase",
            }),
        }
    }
}

impl fmt::Display for Quadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quadrature::Plus => "+",
            Quadrature::Minus => "-",
        })
    }
}

/// Whether two beams' quadratures are added or subtracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combination {
    Sum,
    Diff,
}

impl Combination {
    fn sign(self) -> f64 {
        match self {
            Combination::Sum => 1.0,
            Combination::Diff => -1.0,
        }
    }
}

impl FromStr for Combination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sum" | "+" => Ok(Combination::Sum),
            "diff" | "difference" | "-" => Ok(Combination::Diff),
            _ => Err(Error::UnknownToken {
                token: s.to_string(),
                expected: "sum, diff",
            }),
        }
    }
}

/// Amplitude and phase quadrature variances of a single beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureVariancePair {
    pub v_plus: f64,
    pub v_minus: f64,
}

impl QuadratureVariancePair {
    /// Both variances must be strictly positive and finite. The uncertainty
    /// product is checked separately by [`Self::is_physical`].
    pub fn new(v_plus: f64, v_minus: f64) -> Result<Self> {
        for (name, v) in [("v_plus", v_plus), ("v_minus", v_minus)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonPhysical(format!("{name} = {v} must be positive")));
            }
        }
        Ok(Self { v_plus, v_minus })
    }

    /// Minimum-uncertainty pair with amplitude variance `v`.
    pub fn pure(v: f64) -> Result<Self> {
        Self::new(v, 1.0 / v)
    }

    pub fn uncertainty_product(&self) -> f64 {
        self.v_plus * self.v_minus
    }

    pub fn is_physical(&self) -> bool {
        self.v_plus > 0.0
            && self.v_minus > 0.0
            && self.uncertainty_product() >= 1.0 - UNCERTAINTY_TOL
    }
}

/// A single optical mode: quadrature variances plus the real and imaginary
/// parts of its sideband coherent amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedBeam {
    pub variances: QuadratureVariancePair,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
}

impl SqueezedBeam {
    pub fn new(variances: QuadratureVariancePair, alpha_plus: f64, alpha_minus: f64) -> Self {
        Self {
            variances,
            alpha_plus,
            alpha_minus,
        }
    }

    /// Squeezed vacuum with no coherent amplitude.
    pub fn vacuum_squeezed(v_plus: f64, v_minus: f64) -> Result<Self> {
        Ok(Self::new(
            QuadratureVariancePair::new(v_plus, v_minus)?,
            0.0,
            0.0,
        ))
    }

    /// Pure amplitude-squeezed vacuum: `(v, 1/v)`.
    pub fn pure_amplitude_squeezed(v: f64) -> Result<Self> {
        Ok(Self::new(QuadratureVariancePair::pure(v)?, 0.0, 0.0))
    }

    pub fn vacuum() -> Self {
        Self::new(
            QuadratureVariancePair {
                v_plus: 1.0,
                v_minus: 1.0,
            },
            0.0,
            0.0,
        )
    }
}

/// Symmetrized second moments of the four quadratures of two beams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CmJson", into = "CmJson")]
pub struct CorrelationMatrix4 {
    entries: Matrix4<f64>,
}

#[derive(Serialize, Deserialize)]
struct CmJson {
    order: Vec<String>,
    matrix: [[f64; 4]; 4],
}

impl TryFrom<CmJson> for CorrelationMatrix4 {
    type Error = Error;

    fn try_from(j: CmJson) -> Result<Self> {
        if j.order.len() != 4 || j.order.iter().zip(ORDER).any(|(a, b)| a != b) {
            return Err(Error::InvalidMatrix(format!(
                "order must be {:?}, got {:?}",
                ORDER, j.order
            )));
        }
        CorrelationMatrix4::new(j.matrix)
    }
}

impl From<CorrelationMatrix4> for CmJson {
    fn from(cm: CorrelationMatrix4) -> Self {
        CmJson {
            order: ORDER.iter().map(|s| s.to_string()).collect(),
            matrix: cm.to_array(),
        }
    }
}

impl CorrelationMatrix4 {
    /// Builds a matrix from row-major entries, checking symmetry and positive
    /// diagonal. Physicality is not enforced here; see [`Self::is_physical`].
    pub fn new(rows: [[f64; 4]; 4]) -> Result<Self> {
        let entries = Matrix4::from_fn(|i, j| rows[i][j]);
        Self::from_matrix(entries)
    }

    pub fn from_matrix(entries: Matrix4<f64>) -> Result<Self> {
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("entries must be finite".into()));
        }
        for i in 0..4 {
            if entries[(i, i)] <= 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry {} = {} must be positive",
                    ORDER[i],
                    entries[(i, i)]
                )));
            }
            for j in (i + 1)..4 {
                if (entries[(i, j)] - entries[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidMatrix(format!(
                        "not symmetric at ({}, {}): {} vs {}",
                        ORDER[i],
                        ORDER[j],
                        entries[(i, j)],
                        entries[(j, i)]
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn identity() -> Self {
        Self {
            entries: Matrix4::identity(),
        }
    }

    /// Block form with no cross-quadrature terms (the standard-form layout).
    pub fn block_form(
        cxx_plus: f64,
        cyy_plus: f64,
        cxx_minus: f64,
        cyy_minus: f64,
        cxy_plus: f64,
        cxy_minus: f64,
    ) -> Result<Self> {
        Self::new([
            [cxx_plus, 0.0, cxy_plus, 0.0],
            [0.0, cxx_minus, 0.0, cxy_minus],
            [cxy_plus, 0.0, cyy_plus, 0.0],
            [0.0, cxy_minus, 0.0, cyy_minus],
        ])
    }

    /// Block form with beams `x` and `y` interchangeable.
    pub fn symmetric_form(
        c_plus: f64,
        c_minus: f64,
        cxy_plus: f64,
        cxy_minus: f64,
    ) -> Result<Self> {
        Self::block_form(c_plus, c_plus, c_minus, c_minus, cxy_plus, cxy_minus)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.entries
    }

    pub fn to_array(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.entries[(i, j)];
            }
        }
        out
    }

    /// Variance of beam `x` in quadrature `q`.
    pub fn cxx(&self, q: Quadrature) -> f64 {
        self.entries[(q.x_index(), q.x_index())]
    }

    /// Variance of beam `y` in quadrature `q`.
    pub fn cyy(&self, q: Quadrature) -> f64 {
        self.entries[(q.y_index(), q.y_index())]
    }

    /// Same-quadrature correlation between the beams.
    pub fn cxy(&self, q: Quadrature) -> f64 {
        self.entries[(q.x_index(), q.y_index())]
    }

    /// `⟨(δX_x ± δX_y)²⟩ / 2`, the sum or difference variance normalized to
    /// two-beam shot noise.
    pub fn sum_diff_variance(&self, q: Quadrature, c: Combination) -> f64 {
        0.5 * (self.cxx(q) + self.cyy(q)) + c.sign() * self.cxy(q)
    }

    /// The smaller of the sum and difference variance.
    pub fn min_sum_diff_variance(&self, q: Quadrature) -> f64 {
        self.sum_diff_variance(q, Combination::Sum)
            .min(self.sum_diff_variance(q, Combination::Diff))
    }

    /// Smallest eigenvalue of the Hermitian matrix `CM + iΩ`.
    ///
    /// `Ω` is the single-mode symplectic form `[[0, 1], [-1, 0]]` on each beam.
    /// The eigenvalues come from the real symmetric embedding
    /// `[[A, -B], [B, A]]` of `A + iB`, whose spectrum is that of `A + iB`
    /// with every eigenvalue doubled.
    pub fn min_physical_eigenvalue(&self) -> f64 {
        let omega = symplectic_form();
        let mut embed = SMatrix::<f64, 8, 8>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                embed[(i, j)] = self.entries[(i, j)];
                embed[(i + 4, j + 4)] = self.entries[(i, j)];
                embed[(i, j + 4)] = -omega[(i, j)];
                embed[(i + 4, j)] = omega[(i, j)];
            }
        }
        embed.symmetric_eigenvalues().min()
    }

    /// Opt-in check that the matrix describes a quantum state.
    pub fn is_physical(&self) -> bool {
        self.min_physical_eigenvalue() >= -PHYSICALITY_TOL
    }
}

/// Block-diagonal single-mode symplectic form.
pub fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// True iff the matrix has the symmetric two-beam form: no cross-quadrature
/// correlations and equal variances for both beams in each quadrature.
pub fn check_symmetric_form(cm: &CorrelationMatrix4, tol: f64) -> bool {
    let cross = [(0, 1), (0, 3), (1, 2), (2, 3)];
    cross.iter().all(|&(i, j)| cm.get(i, j).abs() <= tol)
        && Quadrature::BOTH
            .iter()
            .all(|&q| (cm.cxx(q) - cm.cyy(q)).abs() <= tol)
}

/// Coherent amplitudes of both beams plus their correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoModeState {
    /// `(α+, α-)` of beam `x`.
    pub alpha_x: [f64; 2],
    /// `(α+, α-)` of beam `y`.
    pub alpha_y: [f64; 2],
    pub cm: CorrelationMatrix4,
}

impl TwoModeState {
    /// State with zero coherent amplitudes.
    pub fn from_cm(cm: CorrelationMatrix4) -> Self {
        Self {
            alpha_x: [0.0; 2],
            alpha_y: [0.0; 2],
            cm,
        }
    }

    pub fn vacuum() -> Self {
        Self::from_cm(CorrelationMatrix4::identity())
    }

    pub fn sum_diff_variance(&self, q: Quadrature, c: Combination) -> f64 {
        self.cm.sum_diff_variance(q, c)
    }
}

/// Interferes two squeezed beams on a 50/50 beam splitter with a π/2
/// relative phase.
///
/// Output quadratures follow the fixed map
///
/// ```text
/// X+_x = (X+_1 - X-_2)/√2    X-_x = (X-_1 + X+_2)/√2
/// X+_y = (X+_1 + X-_2)/√2    X-_y = (X-_1 - X+_2)/√2
/// ```
///
/// so two amplitude-squeezed inputs give anti-correlated amplitude and
/// correlated phase quadratures. Inputs carry no cross-quadrature
/// correlations.
pub fn entangle_on_beamsplitter(sqz1: &SqueezedBeam, sqz2: &SqueezedBeam) -> Result<TwoModeState> {
    for (name, b) in [("sqz1", sqz1), ("sqz2", sqz2)] {
        if !b.variances.is_physical() {
            return Err(Error::NonPhysical(format!(
                "{name}: uncertainty product {} < 1",
                b.variances.uncertainty_product()
            )));
        }
        if !(b.alpha_plus.is_finite() && b.alpha_minus.is_finite()) {
            return Err(Error::NonPhysical(format!(
                "{name}: coherent amplitude not finite"
            )));
        }
    }
    let (p1, m1) = (sqz1.variances.v_plus, sqz1.variances.v_minus);
    let (p2, m2) = (sqz2.variances.v_plus, sqz2.variances.v_minus);

    let c_plus = 0.5 * (p1 + m2);
    let c_minus = 0.5 * (m1 + p2);
    let cxy_plus = 0.5 * (p1 - m2);
    let cxy_minus = 0.5 * (m1 - p2);
    let cm = CorrelationMatrix4::symmetric_form(c_plus, c_minus, cxy_plus, cxy_minus)?;

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (a1p, a1m) = (sqz1.alpha_plus, sqz1.alpha_minus);
    let (a2p, a2m) = (sqz2.alpha_plus, sqz2.alpha_minus);
    Ok(TwoModeState {
        alpha_x: [s * (a1p - a2m), s * (a1m + a2p)],
        alpha_y: [s * (a1p + a2m), s * (a1m - a2p)],
        cm,
    })
}

fn check_efficiency(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::InvalidEfficiency(eta))
    }
}

/// Independent vacuum-admixture loss on each beam.
///
/// Within a beam `C -> ηC + (1-η)δ`; between beams `C -> √(η_x η_y) C`;
/// coherent amplitudes scale by `√η`.
pub fn apply_loss(state: &TwoModeState, eta_x: f64, eta_y: f64) -> Result<TwoModeState> {
    check_efficiency(eta_x)?;
    check_efficiency(eta_y)?;
    let eta = [eta_x, eta_x, eta_y, eta_y];
    let m = state.cm.matrix();
    let lossy = Matrix4::from_fn(|i, j| {
        if i / 2 == j / 2 {
            let vac = if i == j { 1.0 - eta[i] } else { 0.0 };
            eta[i] * m[(i, j)] + vac
        } else {
            (eta[i] * eta[j]).sqrt() * m[(i, j)]
        }
    });
    let (sx, sy) = (eta_x.sqrt(), eta_y.sqrt());
    Ok(TwoModeState {
        alpha_x: state.alpha_x.map(|a| sx * a),
        alpha_y: state.alpha_y.map(|a| sy * a),
        cm: CorrelationMatrix4::from_matrix(lossy)?,
    })
}

/// Equal local squeezing on both beams: `(X+, X-) -> (g X+, X-/g)`.
pub fn apply_local_squeezing(state: &TwoModeState, gain: f64) -> Result<TwoModeState> {
    if !(gain.is_finite() && gain > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "squeezing gain {gain} must be positive"
        )));
    }
    let scale = [gain, 1.0 / gain, gain, 1.0 / gain];
    let m = state.cm.matrix();
    let squeezed = Matrix4::from_fn(|i, j| scale[i] * scale[j] * m[(i, j)]);
    let amp = |a: [f64; 2]| [gain * a[0], a[1] / gain];
    Ok(TwoModeState {
        alpha_x: amp(state.alpha_x),
        alpha_y: amp(state.alpha_y),
        cm: CorrelationMatrix4::from_matrix(squeezed)?,
    })
}
