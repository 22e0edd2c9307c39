//! Flat, self-contained certificate documents.
//!
//! Every integer is a decimal string so consumers without big integers can
//! still read the document. Re-verification uses only the stored `f` and `g`.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_eval::{determinant_from_factored, factored_form, FactoredForm};
use crate::group_algebra::{direct_determinant, GroupRingElement};
use crate::quad_ring::CaseLabel;
use crate::witness::{Trace, WitnessCertificate};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub n: String,
    pub f: Vec<String>,
    pub g: Vec<String>,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "Y")]
    pub y: String,
    pub family: String,
    pub m: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub four_squares: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub swapped: bool,
    pub verified: bool,
    pub tool_version: String,
}

fn strings(c: &[BigInt]) -> Vec<String> {
    c.iter().map(BigInt::to_string).collect()
}

impl From<&WitnessCertificate> for CertificateDocument {
    fn from(cert: &WitnessCertificate) -> Self {
        let ff = &cert.factored;
        let mut doc = CertificateDocument {
            n: cert.n.to_string(),
            f: strings(&cert.element.a),
            g: strings(&cert.element.b),
            a: ff.a.to_string(),
            b: ff.b.to_string(),
            c: ff.c.to_string(),
            d: ff.d.to_string(),
            x: ff.z.x.to_string(),
            y: ff.z.y.to_string(),
            family: cert.trace.family().formula().to_string(),
            m: String::new(),
            p: None,
            case: None,
            four_squares: None,
            swapped: false,
            verified: cert.verified,
            tool_version: TOOL_VERSION.to_string(),
        };
        match &cert.trace {
            Trace::ClosedForm { m, .. } => doc.m = m.to_string(),
            Trace::PrimeSquare { p, m, four_squares, case, swapped, .. } => {
                doc.m = m.to_string();
                doc.p = Some(p.to_string());
                doc.case = Some(*case);
                doc.four_squares = Some(four_squares.pairs.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect());
                doc.swapped = *swapped;
            }
        }
        doc
    }
}

/// Both determinant routes for one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub direct: BigInt,
    pub factored: FactoredForm,
    pub factored_determinant: BigInt,
}

impl VerifyReport {
    pub fn agree(&self) -> bool {
        self.direct == self.factored_determinant
    }
}

pub fn verify_element(e: &GroupRingElement) -> VerifyReport {
    let factored = factored_form(e);
    VerifyReport {
        direct: direct_determinant(e),
        factored_determinant: determinant_from_factored(&factored),
        factored,
    }
}

fn parse_int(field: &str, s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|_| Error::Document(format!("{field}: {s:?} is not an integer")))
}

fn parse_poly(field: &str, v: &[String]) -> Result<[BigInt; 8]> {
    if v.len() != 8 {
        return Err(Error::Document(format!("{field} needs 8 coefficients, found {}", v.len())));
    }
    let parsed: Vec<BigInt> = v.iter().map(|s| parse_int(field, s)).collect::<Result<_>>()?;
    Ok(std::array::from_fn(|j| parsed[j].clone()))
}

impl CertificateDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn element(&self) -> Result<GroupRingElement> {
        Ok(GroupRingElement::new(parse_poly("f", &self.f)?, parse_poly("g", &self.g)?))
    }

    /// Recomputes both routes from `f`, `g` and checks them against every
    /// stored integer. Returns the report when all agree.
    pub fn reverify(&self) -> Result<VerifyReport> {
        let report = verify_element(&self.element()?);
        let ff = &report.factored;
        let fields = [
            ("n", &self.n, &report.direct),
            ("A", &self.a, &ff.a),
            ("B", &self.b, &ff.b),
            ("C", &self.c, &ff.c),
            ("D", &self.d, &ff.d),
            ("X", &self.x, &ff.z.x),
            ("Y", &self.y, &ff.z.y),
        ];
        for (name, stored, computed) in fields {
            if &parse_int(name, stored)? != computed {
                return Err(Error::Document(format!("{name} = {stored} but recomputed {computed}")));
            }
        }
        if !report.agree() {
            return Err(Error::Document(format!(
                "direct determinant {} differs from factored {}",
                report.direct, report.factored_determinant
            )));
        }
        Ok(report)
    }
}
