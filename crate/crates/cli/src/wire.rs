//! JSON shapes. Complex numbers travel as `[re, im]`; serde_json is built with
//! `float_roundtrip`, so emitting and parsing a value is bit-exact.

use heun_core::connection::{BranchTag, ConnectionMatrix, ConnectionPair, MatrixKind};
use heun_core::heun_series::SubclassParams;
use heun_core::{Complex64, Error};
use serde::{Deserialize, Serialize};

pub type WireComplex = [f64; 2];

pub fn wire(c: Complex64) -> WireComplex {
    [c.re, c.im]
}

pub fn unwire(w: WireComplex) -> Complex64 {
    Complex64::new(w[0], w[1])
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ParamsDto {
    pub alpha: WireComplex,
    pub beta: WireComplex,
    pub gamma: WireComplex,
    pub delta: WireComplex,
}

impl From<&SubclassParams> for ParamsDto {
    fn from(s: &SubclassParams) -> Self {
        Self {
            alpha: wire(s.alpha()),
            beta: wire(s.beta()),
            gamma: wire(s.gamma()),
            delta: wire(s.delta()),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PairDto {
    pub c11: WireComplex,
    pub c12: WireComplex,
}

impl From<&ConnectionPair> for PairDto {
    fn from(p: &ConnectionPair) -> Self {
        Self {
            c11: wire(p.c11),
            c12: wire(p.c12),
        }
    }
}

impl From<&PairDto> for ConnectionPair {
    fn from(p: &PairDto) -> Self {
        Self {
            c11: unwire(p.c11),
            c12: unwire(p.c12),
        }
    }
}

/// A connection matrix, possibly with rows outside the domain of the closed
/// form. Key order is part of the format.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct MatrixDto {
    pub kind: String,
    pub branch_tag: String,
    /// Row-major; `null` for a row outside its domain.
    pub entries: [Option<[WireComplex; 2]>; 2],
    pub row_domain: [bool; 2],
    pub from: [String; 2],
    pub to: [String; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub row_errors: Vec<String>,
}

impl MatrixDto {
    pub fn from_rows(kind: MatrixKind, branch: BranchTag, rows: [Result<[Complex64; 2], Error>; 2]) -> Self {
        let mut row_errors = Vec::new();
        let entries = rows.map(|r| match r {
            Ok(row) => Some(row.map(wire)),
            Err(e) => {
                row_errors.push(e.to_string());
                None
            }
        });
        Self {
            kind: kind.label().to_string(),
            branch_tag: branch.label().to_string(),
            row_domain: entries.map(|e| e.is_some()),
            entries,
            from: kind.from_pair().map(|id| id.label().to_string()),
            to: kind.to_pair().map(|id| id.label().to_string()),
            row_errors,
        }
    }
}

impl From<&ConnectionMatrix> for MatrixDto {
    fn from(m: &ConnectionMatrix) -> Self {
        Self::from_rows(m.kind, m.branch_tag, m.entries.map(Ok))
    }
}

impl TryFrom<&MatrixDto> for ConnectionMatrix {
    type Error = Error;

    fn try_from(d: &MatrixDto) -> Result<Self, Error> {
        let kind: MatrixKind = d.kind.parse()?;
        let branch_tag: BranchTag = d.branch_tag.parse()?;
        let mut entries = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (row, src) in entries.iter_mut().zip(&d.entries) {
            let src = src
                .ok_or_else(|| Error::InvalidParameters(format!("matrix {} has a missing row", d.kind)))?;
            *row = src.map(unwire);
        }
        Ok(ConnectionMatrix {
            kind,
            entries,
            from_pair: kind.from_pair(),
            to_pair: kind.to_pair(),
            branch_tag,
        })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ConnectReport {
    pub params: ParamsDto,
    pub pair: Option<PairDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_error: Option<String>,
    pub matrices: Vec<MatrixDto>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub solution: String,
    pub z: WireComplex,
    pub value: Option<WireComplex>,
    pub derivative: Option<WireComplex>,
    pub method: String,
    /// Series tail bound, or accumulated local error of the integrator.
    pub error_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wronskian_drift: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Why the point was not evaluated (only with `--solution all`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct EvalParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<WireComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<WireComplex>,
    pub alpha: WireComplex,
    pub beta: WireComplex,
    pub gamma: WireComplex,
    pub delta: WireComplex,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub params: EvalParams,
    pub rows: Vec<EvalRow>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CheckDto {
    pub matrix: String,
    pub branch_tag: String,
    pub row: usize,
    pub samples: usize,
    pub max: f64,
    pub mean: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SkippedDto {
    pub matrix: String,
    pub reason: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub params: ParamsDto,
    pub checks: Vec<CheckDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedDto>,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct LimitRowDto {
    pub n: usize,
    pub raw: WireComplex,
    pub extrapolated: Option<WireComplex>,
    pub raw_error: f64,
    pub extrapolated_error: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub params: ParamsDto,
    pub target: WireComplex,
    pub rows: Vec<LimitRowDto>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct LemmaRow {
    pub lemma: String,
    pub case: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CoeffRow {
    pub k: usize,
    pub value: WireComplex,
}
