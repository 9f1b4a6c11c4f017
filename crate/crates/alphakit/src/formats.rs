//! File formats: boundary, source and coefficient JSON, report JSON, and
//! field and kernel CSV.
//!
//! Floats in CSV are written with 17 significant digits so that reading a
//! file back reproduces every binary64 value exactly.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use alphakit_core::analysis::VerificationReport;
use alphakit_core::series::{AlphaHarmonicSeries, CoefficientSequence};
use alphakit_core::solver::{BoundaryData, SourceField};
use alphakit_core::{Alpha, Complex64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Interpolation order for sampled boundary data when the file gives none.
pub const DEFAULT_SAMPLE_ORDER: usize = 3;

/// `{:.16e}`: one digit before the point and sixteen after.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn parse_index(key: &str) -> Result<i64> {
    key.trim()
        .parse::<i64>()
        .map_err(|_| CliError::Invalid(format!("coefficient index {key:?} is not an integer")))
}

fn indexed(map: &BTreeMap<String, [f64; 2]>) -> Result<Vec<(i64, Complex64)>> {
    let mut out = Vec::with_capacity(map.len());
    for (k, v) in map {
        if !(v[0].is_finite() && v[1].is_finite()) {
            return Err(CliError::Invalid(format!("coefficient {k} is not finite")));
        }
        out.push((parse_index(k)?, complex(*v)));
    }
    out.sort_by_key(|t| t.0);
    if out.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(CliError::Invalid("duplicate coefficient index".into()));
    }
    Ok(out)
}

/// `{"fourier": {"k": [re, im], ...}}` or `{"samples": [[re, im], ...]}`,
/// the latter with an optional interpolation `order`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fourier: Option<BTreeMap<String, [f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

impl BoundaryFile {
    pub fn to_boundary(&self) -> Result<BoundaryData> {
        match (&self.fourier, &self.samples) {
            (Some(f), None) => {
                if self.order.is_some() {
                    return Err(CliError::Invalid("\"order\" applies to sampled boundary data only".into()));
                }
                Ok(BoundaryData::fourier(indexed(f)?))
            }
            (None, Some(s)) => {
                let values: Vec<Complex64> = s.iter().map(|v| complex(*v)).collect();
                let order = self.order.unwrap_or(DEFAULT_SAMPLE_ORDER.min(values.len().saturating_sub(1)));
                Ok(BoundaryData::samples(values, order)?)
            }
            (None, None) => Err(CliError::Invalid("boundary JSON needs \"fourier\" or \"samples\"".into())),
            (Some(_), Some(_)) => {
                Err(CliError::Invalid("boundary JSON takes only one of \"fourier\" and \"samples\"".into()))
            }
        }
    }
}

/// A monomial `c z^m z̄^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub m: u32,
    pub n: u32,
    pub c: [f64; 2],
}

/// `{"constant": [re, im]}` or `{"monomials": [{"m", "n", "c"}, ...]}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomials: Option<Vec<Monomial>>,
}

impl SourceFile {
    pub fn to_source(&self) -> Result<SourceField> {
        match (&self.constant, &self.monomials) {
            (Some(c), None) => {
                if !(c[0].is_finite() && c[1].is_finite()) {
                    return Err(CliError::Invalid("source constant is not finite".into()));
                }
                Ok(SourceField::constant(complex(*c)))
            }
            (None, Some(ms)) => {
                if ms.iter().any(|t| !(t.c[0].is_finite() && t.c[1].is_finite())) {
                    return Err(CliError::Invalid("source coefficient is not finite".into()));
                }
                Ok(SourceField::monomials(ms.iter().map(|t| (t.m, t.n, complex(t.c))).collect()))
            }
            (None, None) => Err(CliError::Invalid("source JSON needs \"constant\" or \"monomials\"".into())),
            (Some(_), Some(_)) => {
                Err(CliError::Invalid("source JSON takes only one of \"constant\" and \"monomials\"".into()))
            }
        }
    }
}

/// `{"alpha": number, "coeffs": {"k": [re, im], ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    pub alpha: f64,
    pub coeffs: BTreeMap<String, [f64; 2]>,
}

impl CoefficientFile {
    pub fn from_series(s: &AlphaHarmonicSeries) -> Self {
        CoefficientFile {
            alpha: s.alpha().get(),
            coeffs: s.coefficients().iter().map(|(k, c)| (k.to_string(), [c.re, c.im])).collect(),
        }
    }

    pub fn to_series(&self) -> Result<AlphaHarmonicSeries> {
        let alpha = Alpha::new(self.alpha)?;
        Ok(AlphaHarmonicSeries::new(alpha, CoefficientSequence::new(indexed(&self.coeffs)?)))
    }
}

pub fn read_json<T: serde::de::DeserializeOwned, R: Read>(reader: R) -> Result<T> {
    Ok(serde_json::from_reader(reader)?)
}

pub fn read_json_file<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let file = std::fs::File::open(path)?;
    read_json(std::io::BufReader::new(file))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub x: f64,
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricJson {
    pub name: String,
    pub value: Option<f64>,
}

/// Serialized [`VerificationReport`]. Non-finite numbers become `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub theorem_id: String,
    pub grid: String,
    pub tolerance: f64,
    pub worst_slack: Option<f64>,
    pub violations: Vec<ViolationJson>,
    pub passed: bool,
    pub metrics: Vec<MetricJson>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        ReportJson {
            theorem_id: r.theorem_id.as_str().to_string(),
            grid: r.grid.clone(),
            tolerance: r.tolerance,
            worst_slack: finite(r.worst_slack),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationJson { x: v.point.re, y: v.point.im, lhs: v.lhs, rhs: v.rhs })
                .collect(),
            passed: r.passed,
            metrics: r.metrics.iter().map(|(n, v)| MetricJson { name: n.clone(), value: finite(*v) }).collect(),
        }
    }
}

impl ReportJson {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).and_then(|m| m.value)
    }
}

pub const FIELD_HEADER: [&str; 8] = ["x", "y", "f_re", "f_im", "fz_re", "fz_im", "fzbar_re", "fzbar_im"];

/// One row of the field CSV.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct FieldRow {
    pub x: f64,
    pub y: f64,
    pub f_re: f64,
    pub f_im: f64,
    pub fz_re: f64,
    pub fz_im: f64,
    pub fzbar_re: f64,
    pub fzbar_im: f64,
}

impl FieldRow {
    pub fn new(z: Complex64, f: Complex64, fz: Complex64, fzbar: Complex64) -> Self {
        FieldRow { x: z.re, y: z.im, f_re: f.re, f_im: f.im, fz_re: fz.re, fz_im: fz.im, fzbar_re: fzbar.re, fzbar_im: fzbar.im }
    }

    pub fn point(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.f_re, self.f_im)
    }

    fn record(&self) -> [String; 8] {
        [self.x, self.y, self.f_re, self.f_im, self.fz_re, self.fz_im, self.fzbar_re, self.fzbar_im].map(fmt_f64)
    }
}

pub fn write_field_csv<W: Write>(writer: W, rows: &[FieldRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(FIELD_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field_csv<R: Read>(reader: R) -> Result<Vec<FieldRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.clone();
    if header.iter().ne(FIELD_HEADER) {
        return Err(CliError::Invalid(format!("unexpected field CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for row in r.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

/// Which kernel a `kernel` command evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Poisson,
    Green,
    H,
    Phi,
}

impl KernelKind {
    /// Input columns of the kernel CSV.
    pub fn input_columns(self) -> &'static [&'static str] {
        match self {
            KernelKind::Poisson => &["z_re", "z_im"],
            KernelKind::Green | KernelKind::Phi => &["z_re", "z_im", "w_re", "w_im"],
            KernelKind::H => &["s"],
        }
    }
}

/// One evaluated kernel: the inputs in column order, the value and the
/// a priori modulus bound when one applies.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRow {
    pub inputs: Vec<f64>,
    pub value: Complex64,
    pub abs_bound: Option<f64>,
}

pub fn write_kernel_csv<W: Write>(writer: W, kind: KernelKind, rows: &[KernelRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = kind.input_columns().to_vec();
    header.extend(["value_re", "value_im", "abs_bound"]);
    w.write_record(&header)?;
    for row in rows {
        let mut rec: Vec<String> = row.inputs.iter().map(|x| fmt_f64(*x)).collect();
        rec.push(fmt_f64(row.value.re));
        rec.push(fmt_f64(row.value.im));
        rec.push(row.abs_bound.map(fmt_f64).unwrap_or_default());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads kernel inputs: a CSV whose header names exactly the input columns
/// of `kind`.
pub fn read_kernel_points<R: Read>(reader: R, kind: KernelKind) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.clone();
    let cols = kind.input_columns();
    if header.iter().map(str::trim).ne(cols.iter().copied()) {
        return Err(CliError::Invalid(format!("point file header must be {}", cols.join(","))));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row: std::result::Result<Vec<f64>, _> = rec.iter().map(|s| s.trim().parse::<f64>()).collect();
        out.push(row.map_err(|e| CliError::Invalid(format!("point file: {e}")))?);
    }
    Ok(out)
}
