//! JSON certificate files.
//!
//! Every integer is a decimal string so big values survive any JSON reader.
//! Weil polynomial coefficients are listed descending with their signs,
//! e.g. `["1", "-2", "3", "-10", "25"]` for `x^4 - 2x^3 + 3x^2 - 10x + 25`.

use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use nsrank_core::{
    Certificate, DeductionStep, EndRingVerdict, HyperellipticCurve, PrimeCertificate,
    SimplicityWitness, WeilPolynomial,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_polynomial, render};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read or write certificate: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("certificate is inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub schema_version: String,
    pub curve: CurveRecord,
    pub primes: Vec<PrimeRecord>,
    pub disc_gcd: String,
    pub end_ring: String,
    /// `"1"` or `"unknown"`.
    pub ns_rank: String,
    /// `"true"`, `"false"` or `"unknown"`.
    pub theta_generates: String,
    pub deduction_log: Vec<StepRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveRecord {
    pub expression: String,
    pub coefficients: Vec<String>,
    pub genus: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeRecord {
    pub p: String,
    pub counts: Vec<String>,
    pub weil_coefficients: Vec<String>,
    pub weil_valid: bool,
    pub ordinary: bool,
    pub absolutely_simple: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplicity_witness: Option<String>,
    pub discriminant: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    pub step: String,
    pub statement: String,
    pub anchor: String,
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

impl CertificateFile {
    /// `expression` is the user's curve text; `None` renders the canonical form.
    pub fn from_certificate(cert: &Certificate, expression: Option<&str>) -> Self {
        let coeffs = cert.curve.coeffs();
        Self {
            schema_version: SCHEMA_VERSION.into(),
            curve: CurveRecord {
                expression: expression.map_or_else(|| render(coeffs), str::to_owned),
                coefficients: strings(coeffs),
                genus: cert.curve.genus().to_string(),
            },
            primes: cert
                .prime_certs
                .iter()
                .map(|c| PrimeRecord {
                    p: c.p.to_string(),
                    counts: strings(&c.counts),
                    weil_coefficients: strings(&c.weil.descending_coefficients()),
                    weil_valid: c.weil_valid,
                    ordinary: c.ordinary,
                    absolutely_simple: c.absolutely_simple,
                    simplicity_witness: c.simplicity_witness.as_ref().map(ToString::to_string),
                    discriminant: c.discriminant.to_string(),
                })
                .collect(),
            disc_gcd: cert.disc_gcd.to_string(),
            end_ring: cert.end_ring.to_string(),
            ns_rank: cert.ns_rank.map_or_else(|| "unknown".into(), |r| r.to_string()),
            theta_generates: cert
                .theta_generates
                .map_or_else(|| "unknown".into(), |t| t.to_string()),
            deduction_log: cert
                .deduction_log
                .iter()
                .map(|s| StepRecord {
                    step: s.step.to_string(),
                    statement: s.statement.clone(),
                    anchor: s.anchor.clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds the typed certificate. Fails when the file contradicts
    /// itself (expression vs coefficients, stated vs derived genus) or a
    /// field does not parse.
    pub fn to_certificate(&self) -> Result<Certificate, FileError> {
        let bad = |what: &str, value: &str| FileError::Inconsistent(format!("{what}: {value:?}"));
        if self.schema_version != SCHEMA_VERSION {
            return Err(bad("unsupported schema_version", &self.schema_version));
        }
        let coeffs = self
            .curve
            .coefficients
            .iter()
            .map(|c| parse_int(c, "curve coefficient"))
            .collect::<Result<Vec<BigInt>, _>>()?;
        let from_expr = parse_polynomial(&self.curve.expression)
            .map_err(|e| FileError::Inconsistent(format!("curve expression: {e}")))?;
        if from_expr != coeffs {
            return Err(FileError::Inconsistent(
                "curve expression does not expand to the listed coefficients".into(),
            ));
        }
        let curve = HyperellipticCurve::new(coeffs)
            .map_err(|e| FileError::Inconsistent(format!("curve: {e}")))?;
        let genus: usize = parse_small(&self.curve.genus, "genus")?;
        if genus != curve.genus() {
            return Err(FileError::Inconsistent(format!(
                "stated genus {genus}, curve has genus {}",
                curve.genus()
            )));
        }

        let prime_certs = self
            .primes
            .iter()
            .map(|r| r.to_prime_certificate(genus))
            .collect::<Result<Vec<_>, _>>()?;

        let ns_rank = match self.ns_rank.as_str() {
            "unknown" => None,
            s => Some(parse_small::<u32>(s, "ns_rank")?),
        };
        let theta_generates = match self.theta_generates.as_str() {
            "unknown" => None,
            "true" => Some(true),
            "false" => Some(false),
            s => return Err(bad("theta_generates", s)),
        };
        let deduction_log = self
            .deduction_log
            .iter()
            .map(|s| {
                Ok(DeductionStep {
                    step: parse_small(&s.step, "step")?,
                    statement: s.statement.clone(),
                    anchor: s.anchor.clone(),
                })
            })
            .collect::<Result<Vec<_>, FileError>>()?;

        Ok(Certificate {
            curve,
            prime_certs,
            disc_gcd: parse_int(&self.disc_gcd, "disc_gcd")?,
            end_ring: self
                .end_ring
                .parse::<EndRingVerdict>()
                .map_err(FileError::Inconsistent)?,
            ns_rank,
            theta_generates,
            deduction_log,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, FileError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Writes to a temporary file beside `path`, then renames over it.
    pub fn write_atomic(&self, path: &Path) -> Result<(), FileError> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(self.to_json().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| FileError::Io(e.error))?;
        Ok(())
    }
}

impl PrimeRecord {
    fn to_prime_certificate(&self, genus: usize) -> Result<PrimeCertificate, FileError> {
        let p: u64 = parse_small(&self.p, "p")?;
        let counts = self
            .counts
            .iter()
            .map(|c| parse_small(c, "count"))
            .collect::<Result<Vec<u64>, _>>()?;
        let coeffs = self
            .weil_coefficients
            .iter()
            .map(|c| parse_int(c, "weil coefficient"))
            .collect::<Result<Vec<_>, _>>()?;
        let weil = WeilPolynomial::from_descending(p, genus, &coeffs)
            .map_err(|e| FileError::Inconsistent(format!("p = {p}: {e}")))?;
        let simplicity_witness = self
            .simplicity_witness
            .as_deref()
            .map(str::parse::<SimplicityWitness>)
            .transpose()
            .map_err(FileError::Inconsistent)?;
        Ok(PrimeCertificate {
            p,
            counts,
            weil,
            weil_valid: self.weil_valid,
            ordinary: self.ordinary,
            absolutely_simple: self.absolutely_simple,
            simplicity_witness,
            discriminant: parse_int(&self.discriminant, "discriminant")?,
        })
    }
}

/// Strict decimal: optional '-', digits, nothing else.
fn parse_int(s: &str, what: &str) -> Result<BigInt, FileError> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(FileError::Inconsistent(format!("{what} is not a decimal integer: {s:?}")));
    }
    Ok(s.parse().expect("validated decimal"))
}

fn parse_small<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, FileError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(FileError::Inconsistent(format!("{what} is not a nonnegative decimal: {s:?}")));
    }
    s.parse()
        .map_err(|_| FileError::Inconsistent(format!("{what} out of range: {s:?}")))
}
