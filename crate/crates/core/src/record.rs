//! JSON solution records: a serializable mirror of
//! [`ElementaryEigenfunction`] and the loader that rebuilds one.
//!
//! A solution file is a JSON array of records. Floats are written in the
//! shortest form that reads back to the same `f64`; exact values travel as
//! numerator/denominator strings next to their floats.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{AngularFactor, ElementaryEigenfunction, ExactMatch, MathieuFactor, Provenance};
use crate::mathieu::{MathieuCharacteristic, Parity};
use crate::scalar::{convergents, parse_rational, Rational, Scalar};
use crate::separation::{self, CenterPair, Kind, SeparatedSolution, SolutionType};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactRational {
    pub num: String,
    pub den: String,
}

impl ExactRational {
    pub fn new(r: &Rational) -> Self {
        ExactRational {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }

    pub fn value(&self) -> Result<Rational> {
        parse_rational(&format!("{}/{}", self.num, self.den))
            .ok_or_else(|| Error::InvalidParameter(format!("bad rational {}/{}", self.num, self.den)))
    }
}

/// A float with its exact value when one is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Number {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactRational>,
}

impl Number {
    fn float(value: f64) -> Self {
        Number { value, exact: None }
    }

    fn with_exact(value: f64, exact: Option<&Rational>) -> Self {
        Number {
            value,
            exact: exact.map(ExactRational::new),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRecord {
    #[serde(rename = "type")]
    pub sol_type: SolutionType,
    pub level: usize,
    pub branch: usize,
    pub q: Number,
    /// Coefficients in powers of `(x+1)`, constant term first.
    pub coefficients: Vec<Number>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MathieuRecord {
    pub parity: Parity,
    pub order: usize,
    pub p: f64,
    /// `a_n(p)` or `b_n(p)`.
    pub value: f64,
    pub fourier: Vec<f64>,
    pub truncation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AngularRecord {
    Polynomial(FactorRecord),
    Mathieu(MathieuRecord),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub samples: usize,
    pub seed: u64,
    pub max_relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub schema: u32,
    pub z1: Number,
    pub z2: Number,
    pub r: Number,
    pub energy: Number,
    pub lambda: Number,
    pub radial: FactorRecord,
    pub angular: AngularRecord,
    pub normalization: Option<f64>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<ResidualReport>,
}

/// Exact value of a float that is a small-denominator rational.
fn exact_if_simple(x: f64) -> Option<Rational> {
    convergents(x, 1_000_000).into_iter().find(|c| c.to_f64_lossy() == x)
}

fn factor_record(f: &SeparatedSolution<f64>, exact: Option<&SeparatedSolution<Rational>>) -> FactorRecord {
    let coefficients = match exact {
        Some(ex) => ex
            .poly
            .coeffs
            .iter()
            .map(|c| Number::with_exact(c.to_f64_lossy(), Some(c)))
            .collect(),
        None => f.poly.coeffs.iter().map(|&c| Number::float(c)).collect(),
    };
    FactorRecord {
        sol_type: f.sol_type,
        level: f.level,
        branch: f.branch.j,
        q: Number::with_exact(f.poly.q, exact.map(|ex| &ex.poly.q)),
        coefficients,
    }
}

impl SolutionRecord {
    pub fn from_solution(sol: &ElementaryEigenfunction, residual: Option<ResidualReport>) -> Self {
        let ex = sol.exact.as_ref();
        let charge = |x: f64, exact: Option<&Rational>| {
            Number::with_exact(x, exact.cloned().or_else(|| exact_if_simple(x)).as_ref())
        };
        let angular = match &sol.angular {
            AngularFactor::Polynomial(a) => AngularRecord::Polynomial(factor_record(a, ex.map(|e| &e.angular))),
            AngularFactor::Mathieu(m) => {
                let c = &m.characteristic;
                AngularRecord::Mathieu(MathieuRecord {
                    parity: c.parity,
                    order: c.order,
                    p: c.p,
                    value: c.value,
                    fourier: c.fourier.clone(),
                    truncation: c.truncation,
                })
            }
        };
        SolutionRecord {
            schema: SCHEMA_VERSION,
            z1: charge(sol.centers.z1, ex.map(|e| &e.radial.centers.z1)),
            z2: charge(sol.centers.z2, ex.map(|e| &e.radial.centers.z2)),
            r: Number::with_exact(sol.r(), ex.map(|e| &e.r)),
            energy: Number::with_exact(sol.energy, ex.map(|e| &e.energy)),
            lambda: Number::with_exact(sol.lambda, ex.map(|e| &e.lambda)),
            radial: factor_record(&sol.radial, ex.map(|e| &e.radial)),
            angular,
            normalization: sol.normalization,
            provenance: sol.provenance.clone(),
            residual,
        }
    }

    /// Rebuilds the eigenfunction from the stored data. Energy, separation
    /// constant and coefficients are taken as written, so a tampered record
    /// is evaluated as such.
    pub fn to_solution(&self) -> Result<ElementaryEigenfunction> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::InvalidParameter(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        let centers = CenterPair::new(self.z1.value, self.z2.value)?.with_r(self.r.value)?;
        let radial = rebuild_factor(Kind::Radial, &self.radial, &centers)?;
        let angular = match &self.angular {
            AngularRecord::Polynomial(a) => AngularFactor::Polynomial(rebuild_factor(Kind::Angular, a, &centers)?),
            AngularRecord::Mathieu(m) => {
                if m.fourier.is_empty() || m.fourier.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidParameter("Mathieu Fourier coefficients missing or not finite".into()));
                }
                if m.parity == Parity::Sine && m.order == 0 {
                    return Err(Error::InvalidParameter("sine-type Mathieu functions start at order 1".into()));
                }
                AngularFactor::Mathieu(MathieuFactor {
                    characteristic: MathieuCharacteristic {
                        parity: m.parity,
                        order: m.order,
                        p: m.p,
                        value: m.value,
                        fourier: m.fourier.clone(),
                        truncation: m.truncation,
                    },
                })
            }
        };
        if !(self.energy.value.is_finite() && self.energy.value < 0.0) {
            return Err(Error::InvalidParameter(format!("energy must be negative, got {}", self.energy.value)));
        }
        Ok(ElementaryEigenfunction {
            centers,
            energy: self.energy.value,
            lambda: self.lambda.value,
            exact: self.rebuild_exact()?,
            radial,
            angular,
            normalization: self.normalization,
            provenance: self.provenance.clone(),
        })
    }

    /// The exact pair of factors, when every input needed for it is exact.
    fn rebuild_exact(&self) -> Result<Option<ExactMatch>> {
        let AngularRecord::Polynomial(ang) = &self.angular else {
            return Ok(None);
        };
        let (Some(z1), Some(z2), Some(r), Some(_), Some(_)) = (
            &self.z1.exact,
            &self.z2.exact,
            &self.r.exact,
            &self.radial.q.exact,
            &ang.q.exact,
        ) else {
            return Ok(None);
        };
        let centers = CenterPair::new(z1.value()?, z2.value()?)?.with_r(r.value()?)?;
        let build = |kind, f: &FactorRecord| separation::assemble_factor(kind, f.sol_type, f.level, f.branch, &centers);
        let radial = build(Kind::Radial, &self.radial)?;
        let angular = build(Kind::Angular, ang)?;
        if radial.lambda != angular.lambda {
            return Err(Error::InvalidParameter(
                "exact separation constants of the two factors differ".into(),
            ));
        }
        Ok(Some(ExactMatch {
            r: centers.r()?.clone(),
            energy: radial.energy.clone(),
            lambda: radial.lambda.clone(),
            radial,
            angular,
        }))
    }
}

fn rebuild_factor(kind: Kind, f: &FactorRecord, centers: &CenterPair<f64>) -> Result<SeparatedSolution<f64>> {
    let coeffs = f.coefficients.iter().map(|c| c.value).collect();
    separation::factor_from_parts(kind, f.sol_type, f.level, f.branch, centers, f.q.value, coeffs)
}

pub fn write_records<W: Write>(records: &[SolutionRecord], mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)
}

/// Parses a solution file; an empty array or empty input is rejected.
pub fn read_records<R: Read>(input: R) -> Result<Vec<SolutionRecord>> {
    let records: Vec<SolutionRecord> =
        serde_json::from_reader(input).map_err(|e| Error::InvalidParameter(format!("solution file: {e}")))?;
    if records.is_empty() {
        return Err(Error::InvalidParameter("solution file holds no records".into()));
    }
    Ok(records)
}
