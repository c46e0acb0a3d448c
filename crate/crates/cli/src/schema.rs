//! JSON documents written by the CLI.

use serde::{Deserialize, Serialize};
use torus2c_core::diophantine::Approximability;
use torus2c_core::funcspace::JsonBigUint;
use torus2c_core::order2::{Order2Classification, Verdict};
use torus2c_core::BoundFormulas;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergentOut {
    pub p: String,
    pub q: String,
    pub abs_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CfOutput {
    pub alpha: String,
    pub a0: String,
    pub partial_quotients: Vec<JsonBigUint>,
    pub convergents: Vec<ConvergentOut>,
    pub v_estimate: f64,
    pub running_min: f64,
    pub badly_approximable: Approximability,
    pub max_quotient: Option<JsonBigUint>,
    pub terminated: bool,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsOutput {
    pub n: usize,
    pub eps: f64,
    #[serde(flatten)]
    pub bounds: BoundFormulas,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BTermOut {
    pub n: JsonBigUint,
    /// `null` when the small divisor vanishes to working precision.
    pub b_abs: Option<f64>,
    pub b_re: Option<f64>,
    pub b_im: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoboundaryOutput {
    pub alpha: String,
    pub l: i64,
    pub c: f64,
    pub terms: Vec<BTermOut>,
    pub partial_sums: Vec<(JsonBigUint, Option<f64>)>,
    pub verdict: Verdict,
    pub order2: Order2Classification,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErgodicRow {
    pub n: usize,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErgodicOutput {
    pub alpha: String,
    pub x: f64,
    pub rows: Vec<ErgodicRow>,
    pub evidence_only: bool,
}
