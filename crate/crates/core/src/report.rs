//! JSON report types and serialization helpers. Reports are reproducible:
//! identical configs give identical JSON except for the timing block.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1.0";

/// Serde adapter storing a Complex64 as an {re, im} object.
pub mod cpx {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Parts {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Parts { re: v.re, im: v.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let p = Parts::deserialize(d)?;
        Ok(Complex64::new(p.re, p.im))
    }
}

/// Per-run wall-clock figures; excluded from reproducibility comparisons.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timing {
    pub wall_ms: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub mode: String,
    /// Echo of the parsed configuration, normalized key = value lines.
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<crate::spectrum::Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub zeros: Vec<crate::spectrum::ZeroRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub residuals: Vec<ResidualRow>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub timing: Timing,
}

impl Report {
    pub fn new(mode: &str) -> Report {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            mode: mode.to_string(),
            inputs: Vec::new(),
            verdict: None,
            zeros: Vec::new(),
            residuals: Vec::new(),
            notes: Vec::new(),
            timing: Timing { wall_ms: 0 },
        }
    }

    /// JSON with the timing block zeroed, for reproducibility comparisons.
    pub fn stable_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(t) = v.get_mut("timing") {
            *t = serde_json::json!({ "wall_ms": 0 });
        }
        v
    }
}

/// One labeled residual (identity name, evaluation point, magnitude).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualRow {
    pub name: String,
    #[serde(with = "cpx")]
    pub k: num_complex::Complex64,
    pub value: f64,
}
