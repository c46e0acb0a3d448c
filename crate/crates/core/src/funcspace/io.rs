//! JSON function files.
//!
//! ```json
//! { "l": 1, "periodic": { "type": "fourier", "terms": [ {"n": 64, "re": 0.1, "im": -0.2} ] } }
//! { "l": 0, "periodic": { "type": "piecewise_linear", "knots": [[0.0, 0.0], [0.5, 1.0]] } }
//! ```
//!
//! Frequencies are JSON integers of arbitrary size. A Fourier block may also
//! carry an optional `"constant"` zero mode.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use super::{FlFunction, FourierSeries, FourierTerm, PeriodicPart};
use crate::error::{Error, Result};

/// Arbitrary-size nonnegative integer carried as a bare JSON number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonBigUint(pub BigUint);

impl Serialize for JsonBigUint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.0.to_string()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonBigUint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Box<RawValue> = Deserialize::deserialize(d)?;
        let text = raw.get().trim().trim_matches('"');
        BigUint::from_str(text)
            .map(JsonBigUint)
            .map_err(|_| serde::de::Error::custom(format!("expected a nonnegative integer, got {text}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub n: JsonBigUint,
    pub re: f64,
    pub im: f64,
}

/// The `periodic` block. Kept as a flat struct (rather than a tagged enum)
/// so that raw integer values survive deserialization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knots: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub l: i64,
    pub periodic: PeriodicSpec,
}

impl FunctionFile {
    pub fn from_function(f: &FlFunction) -> Self {
        let periodic = match f.periodic() {
            PeriodicPart::Fourier(s) => PeriodicSpec {
                kind: "fourier".into(),
                terms: Some(
                    s.terms()
                        .iter()
                        .map(|t| TermSpec {
                            n: JsonBigUint(t.frequency().clone()),
                            re: t.coeff().re,
                            im: t.coeff().im,
                        })
                        .collect(),
                ),
                constant: (s.constant() != 0.0).then_some(s.constant()),
                knots: None,
            },
            PeriodicPart::PiecewiseLinear(p) => PeriodicSpec {
                kind: "piecewise_linear".into(),
                terms: None,
                constant: None,
                knots: Some(p.knots().iter().map(|&(x, y)| [x, y]).collect()),
            },
        };
        FunctionFile {
            l: f.degree(),
            periodic,
        }
    }

    pub fn into_function(self) -> Result<FlFunction> {
        let p = self.periodic;
        match p.kind.as_str() {
            "fourier" => {
                if p.knots.is_some() {
                    return Err(Error::Format("fourier block must not carry knots".into()));
                }
                let terms = p
                    .terms
                    .unwrap_or_default()
                    .into_iter()
                    .map(|t| FourierTerm::new(t.n.0, Complex64::new(t.re, t.im)))
                    .collect::<Result<Vec<_>>>()?;
                let series = FourierSeries::new(terms)?.with_constant(p.constant.unwrap_or(0.0));
                Ok(FlFunction::fourier(self.l, series))
            }
            "piecewise_linear" => {
                if p.terms.is_some() || p.constant.is_some() {
                    return Err(Error::Format("piecewise_linear block takes only knots".into()));
                }
                let knots = p
                    .knots
                    .ok_or_else(|| Error::Format("piecewise_linear block needs knots".into()))?;
                FlFunction::piecewise_linear(self.l, knots.into_iter().map(|[x, y]| (x, y)).collect())
            }
            other => Err(Error::Format(format!("unknown periodic type {other:?}"))),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("function file serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl FlFunction {
    pub fn from_json(text: &str) -> Result<Self> {
        FunctionFile::parse(text)?.into_function()
    }

    pub fn to_json(&self) -> String {
        FunctionFile::from_function(self).to_json()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
