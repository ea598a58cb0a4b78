use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::colfin::{first_mismatch, matrix_from_json, matrix_to_json, ColFinMatrix, MatrixJson};
use crate::ring::{ring_from_json, HomJson, HomRegistry, RingHom, RingJson, SectionJson};

use super::lift::word_product;
use super::{LiftCertificate, LiftError, LiftFactor, ProofStep, Sidedness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorJson {
    pub form: MatrixJson,
    pub side: Sidedness,
    pub step: ProofStep,
}

/// Everything covered by the content hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateBody {
    pub hom: String,
    pub source: RingJson,
    pub target: RingJson,
    pub section: SectionJson,
    pub input: MatrixJson,
    pub word_length: usize,
    /// The lift is the product of these factors in order (all act on the right of `Id`).
    pub factors: Vec<FactorJson>,
    pub verified_window: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(flatten)]
    pub body: CertificateBody,
    /// Hex SHA-256 of the compact JSON encoding of `body`.
    pub content_hash: String,
}

pub fn content_hash(body: &CertificateBody) -> String {
    let bytes = serde_json::to_vec(body).expect("certificate body serializes");
    hex::encode(Sha256::digest(&bytes))
}

impl LiftCertificate {
    pub fn to_json(&self) -> CertificateJson {
        let hom = HomJson::from_hom(&self.hom);
        let body = CertificateBody {
            hom: hom.name,
            source: hom.source,
            target: hom.target,
            section: hom.section,
            input: matrix_to_json(&self.input),
            word_length: self.factors.len(),
            factors: self
                .factors
                .iter()
                .map(|f| FactorJson {
                    form: matrix_to_json(&f.matrix),
                    side: Sidedness::Right,
                    step: f.step,
                })
                .collect(),
            verified_window: self.verified_window,
        };
        let content_hash = content_hash(&body);
        CertificateJson { body, content_hash }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub window: usize,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verification at window {}", self.window)?;
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  [{mark}] {:<20} {:>9.1} ms  {}", c.name, c.millis, c.detail)?;
        }
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn timed(name: &str, f: impl FnOnce() -> Result<String, String>) -> CheckResult {
    let start = Instant::now();
    let r = f();
    let millis = start.elapsed().as_secs_f64() * 1000.0;
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult { name: name.into(), passed, detail, millis }
}

fn skipped(name: &str, why: &str) -> CheckResult {
    CheckResult { name: name.into(), passed: false, detail: format!("skipped: {why}"), millis: 0.0 }
}

struct Parsed {
    hom: RingHom,
    input: ColFinMatrix,
    factors: Vec<LiftFactor>,
}

fn parse(cert: &CertificateJson, registry: &HomRegistry) -> Result<Parsed, String> {
    let b = &cert.body;
    let hom = registry.get(&b.hom).ok_or_else(|| format!("unknown hom `{}`", b.hom))?;
    let registered = HomJson::from_hom(hom);
    if registered.source != b.source || registered.target != b.target {
        return Err(format!("rings of `{}` differ from the registry", b.hom));
    }
    if registered.section != b.section {
        return Err(format!("section of `{}` differs from the registry", b.hom));
    }
    let source = ring_from_json(&b.source).map_err(|e| e.to_string())?;
    let target = ring_from_json(&b.target).map_err(|e| e.to_string())?;
    let input = matrix_from_json(&b.input, &target).map_err(|e| format!("input: {e}"))?;
    let mut factors = Vec::new();
    for (i, f) in b.factors.iter().enumerate() {
        let m = matrix_from_json(&f.form, &source).map_err(|e| format!("factor {i}: {e}"))?;
        if f.side != Sidedness::Right {
            return Err(format!("factor {i}: lift factors must act on the right"));
        }
        factors.push(LiftFactor { matrix: m, step: f.step });
    }
    if b.word_length != factors.len() {
        return Err("word_length does not match the factor list".into());
    }
    Ok(Parsed { hom: hom.clone(), input, factors })
}

/// Re-checks a certificate: content hash, factor classes, `hom(lift) = input`
/// and `lift * lift^-1 = Id` on the `window x window` corner.
pub fn verify_certificate(
    cert: &CertificateJson,
    registry: &HomRegistry,
    window: usize,
) -> VerificationReport {
    let mut checks = Vec::new();
    checks.push(timed("content-hash", || {
        let h = content_hash(&cert.body);
        if h == cert.content_hash {
            Ok(h)
        } else {
            Err(format!("stored {} but content hashes to {h}", cert.content_hash))
        }
    }));
    let parsed = parse(cert, registry);
    checks.push(timed("parse", || match &parsed {
        Ok(p) => Ok(format!("{} factors over {}", p.factors.len(), p.hom.source())),
        Err(e) => Err(e.clone()),
    }));
    let names = ["factor-classes", "image-equals-input", "lift-times-inverse"];
    let Ok(p) = parsed else {
        checks.extend(names.iter().map(|n| skipped(n, "certificate did not parse")));
        return VerificationReport { window, checks };
    };
    checks.push(timed(names[0], || {
        match p.factors.iter().position(|f| !f.matrix.is_liftable_generator()) {
            None => Ok("all factors are elementary, permutation or sign matrices".into()),
            Some(i) => Err(format!("factor {i} is a {}", p.factors[i].matrix.form_name())),
        }
    }));
    let lift = word_product(&p.hom, &p.factors);
    match lift {
        Err(e) => {
            let why = e.to_string();
            checks.extend(names[1..].iter().map(|n| skipped(n, &why)));
        }
        Ok(lift) => {
            checks.push(timed(names[1], || {
                let image = lift.matrix.map_hom(&p.hom).map_err(|e| e.to_string())?;
                match first_mismatch(&image, &p.input, window) {
                    None => Ok(format!("equal on the {window}x{window} window")),
                    Some((i, j)) => Err(format!("first mismatch at ({i}, {j})")),
                }
            }));
            checks.push(timed(names[2], || {
                let prod = ColFinMatrix::product(p.hom.source(), vec![lift.matrix, lift.inverse])
                    .map_err(|e| e.to_string())?;
                let w = prod.window(window);
                if w.is_identity() {
                    Ok(format!("identity on the {window}x{window} window"))
                } else {
                    Err("not the identity".into())
                }
            }));
        }
    }
    VerificationReport { window, checks }
}

/// Parses a certificate back into its in-memory form.
pub fn certificate_from_json(
    cert: &CertificateJson,
    registry: &HomRegistry,
) -> Result<LiftCertificate, LiftError> {
    let p = parse(cert, registry).map_err(LiftError::Certificate)?;
    Ok(LiftCertificate {
        hom: p.hom,
        input: p.input,
        factors: p.factors,
        verified_window: cert.body.verified_window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::gl_lift;
    use crate::ring::{builtin_registry, parse_element};

    fn flagship(window: usize) -> CertificateJson {
        let reg = builtin_registry();
        let h = reg.get("zxy_to_laurent").unwrap();
        let u = parse_element(h.target(), "u").unwrap();
        let p = ColFinMatrix::scalar_diagonal(h.target(), vec![], u).unwrap();
        gl_lift(h, &p.invert().unwrap(), window).unwrap().to_json()
    }

    #[test]
    fn roundtrip_and_verify() {
        let reg = builtin_registry();
        let cert = flagship(16);
        let text = serde_json::to_string_pretty(&cert).unwrap();
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        let report = verify_certificate(&back, &reg, 16);
        assert!(report.passed(), "{report}");
        let parsed = certificate_from_json(&back, &reg).unwrap();
        assert_eq!(parsed.to_json(), cert);
    }

    #[test]
    fn tampering_is_detected() {
        let reg = builtin_registry();
        let mut cert = flagship(12);
        cert.body.input = MatrixJson::ScalarDiagonal { prefix: vec!["u".into(), "u^2".into()], tail: "u".into() };
        let report = verify_certificate(&cert, &reg, 12);
        assert!(!report.check("content-hash").unwrap().passed);
        let image = report.check("image-equals-input").unwrap();
        assert!(!image.passed);
        assert!(image.detail.contains("(1, 1)"), "{}", image.detail);
    }
}
