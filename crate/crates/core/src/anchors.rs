//! Reference correlation matrices measured at fixed sideband frequencies,
//! loaded from a JSON fixture.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::CorrelationMatrix4;
use crate::spectra::SpectrumRow;

/// Fixture compiled into the library.
pub const BUNDLED_ANCHORS: &str = include_str!("../../../fixtures/paper_anchors.json");

/// Values read off the measured spectra at an anchor frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportedValues {
    pub v_sum_plus: f64,
    pub v_diff_minus: f64,
    pub cv_plus: f64,
    pub cv_minus: f64,
    pub inseparability: f64,
    pub epr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub frequency_mhz: f64,
    #[serde(flatten)]
    pub cm: CorrelationMatrix4,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reported: Option<ReportedValues>,
}

impl Anchor {
    /// Spectrum row built from the matrix diagonal and the reported
    /// sum/difference variances, when those were recorded.
    pub fn reported_row(&self) -> Option<SpectrumRow> {
        let r = self.reported?;
        let m = self.cm.matrix();
        Some(SpectrumRow {
            frequency_mhz: self.frequency_mhz,
            vx_plus: m[(0, 0)],
            vx_minus: m[(1, 1)],
            vy_plus: m[(2, 2)],
            vy_minus: m[(3, 3)],
            v_sum_plus: r.v_sum_plus,
            v_diff_minus: r.v_diff_minus,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anchors {
    /// Relative uncertainty of the measured entries.
    pub statistical_error: f64,
    #[serde(flatten)]
    pub entries: BTreeMap<String, Anchor>,
}

impl Anchors {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_ANCHORS).expect("bundled anchor fixture is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Looks up an anchor by key. `"6.5MHz"`, `"6.5 mhz"` and `"6.5"` all
    /// resolve to the 6.5 MHz entry.
    pub fn get(&self, key: &str) -> Result<&Anchor> {
        if let Some(a) = self.entries.get(key) {
            return Ok(a);
        }
        let lowered = key.trim().to_ascii_lowercase();
        let number = lowered.strip_suffix("mhz").unwrap_or(&lowered).trim();
        if let Ok(f) = number.parse::<f64>() {
            if let Some(a) = self
                .entries
                .values()
                .find(|a| (a.frequency_mhz - f).abs() < 1e-9)
            {
                return Ok(a);
            }
        }
        Err(Error::InvalidArgument(format!(
            "no anchor '{key}' (available: {})",
            self.entries.keys().cloned().collect::<Vec<_>>().join(", ")
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::Quadrature;

    #[test]
    fn bundled_fixture_loads() {
        let a = Anchors::bundled();
        assert_eq!(a.statistical_error, 0.05);
        assert_eq!(a.entries.len(), 2);
        let hi = a.get("6.5MHz").unwrap();
        assert_eq!(hi.cm.cxy(Quadrature::Plus), -2.9);
        assert_eq!(hi.cm.cxy(Quadrature::Minus), 2.9);
        assert!(hi.reported.is_some());
        let lo = a.get("3.5 mhz").unwrap();
        assert_eq!(lo.cm.cxx(Quadrature::Minus), 6.1);
        assert!(lo.reported.is_none());
        assert_eq!(a.get("3.5").unwrap(), lo);
        assert!(a.get("9MHz").is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = Anchors::bundled();
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(Anchors::parse(&text).unwrap(), a);
    }

    #[test]
    fn reported_row_rebuilds_variances() {
        let row = Anchors::bundled()
            .get("6.5MHz")
            .unwrap()
            .reported_row()
            .unwrap();
        assert_eq!(row.vx_plus, 3.3);
        assert_eq!(row.v_sum_plus, 0.44);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = Anchors::load(Path::new("/no/such/anchors.json")).unwrap_err();
        assert!(err.is_io());
    }
}
