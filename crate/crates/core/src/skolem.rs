//! Inner automorphisms of `Mat_n(R)` for `R = Z` or `Z/p`: validating a
//! table of matrix-unit images and recovering a conjugator `U` with
//! `phi(X) = U X U^-1`.
//!
//! Indices are 0-based in the API; JSON keys and report messages use the
//! 1-based `E_ij` convention.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colfin::Dense;
use crate::ring::{content, parse_element, ring_from_json, ring_to_json, Ring, RingDescriptor, RingElement, RingError, RingJson};

#[derive(Debug, Error)]
pub enum SkolemError {
    #[error("not an algebra automorphism: {0}")]
    InvalidSpec(String),
    #[error("unsupported ring {0}: recovery needs Z or Z/p")]
    UnsupportedRing(String),
    #[error(
        "image of q_{index} is not free of rank 1: {reason} \
         (in general these images are only invertible modules)"
    )]
    NotFreeRankOne { index: usize, reason: String },
    #[error("generator matrix has non-unit determinant {0}")]
    SingularGenerators(String),
    #[error("scalar s_{i}{j} = {value} is not a unit")]
    NotUnit { i: usize, j: usize, value: String },
    #[error("recovery check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `phi(E_ij)` for all `i, j < n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraAutoSpec {
    ring: Ring,
    n: usize,
    images: Vec<Vec<Dense>>,
}

pub fn matrix_unit(ring: &Ring, n: usize, i: usize, j: usize) -> Dense {
    let mut e = Dense::zeros(ring, n, n);
    e.set(i, j, RingElement::one(ring));
    e
}

impl AlgebraAutoSpec {
    /// Shapes are checked here; algebraic invariants by [`validate_auto_spec`].
    pub fn new(ring: &Ring, images: Vec<Vec<Dense>>) -> Result<Self, SkolemError> {
        let n = images.len();
        if n == 0 {
            return Err(SkolemError::InvalidSpec("rank must be at least 1".into()));
        }
        for (i, row) in images.iter().enumerate() {
            if row.len() != n {
                return Err(SkolemError::InvalidSpec(format!("row {} has {} images", i + 1, row.len())));
            }
            for (j, m) in row.iter().enumerate() {
                if m.rows() != n || m.cols() != n {
                    return Err(SkolemError::InvalidSpec(format!(
                        "phi(E_{}{}) is {}x{}, expected {n}x{n}",
                        i + 1,
                        j + 1,
                        m.rows(),
                        m.cols()
                    )));
                }
                if m.ring() != ring {
                    return Err(SkolemError::InvalidSpec(format!("phi(E_{}{}) has the wrong ring", i + 1, j + 1)));
                }
            }
        }
        Ok(AlgebraAutoSpec { ring: ring.clone(), n, images })
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let images = (0..n).map(|i| (0..n).map(|j| matrix_unit(ring, n, i, j)).collect()).collect();
        AlgebraAutoSpec { ring: ring.clone(), n, images }
    }

    /// The table of `conj_U`.
    pub fn from_conjugator(u: &Dense) -> Result<Self, SkolemError> {
        let inv = u.inverse()?;
        let (ring, n) = (u.ring(), u.rows());
        let images = (0..n)
            .map(|i| (0..n).map(|j| u.mul(&matrix_unit(ring, n, i, j)).mul(&inv)).collect())
            .collect();
        Ok(AlgebraAutoSpec { ring: ring.clone(), n, images })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn image(&self, i: usize, j: usize) -> &Dense {
        &self.images[i][j]
    }

    pub fn image_mut(&mut self, i: usize, j: usize) -> &mut Dense {
        &mut self.images[i][j]
    }
}

/// Returns `f` when `m = f * Id`.
pub fn central_scalar(m: &Dense) -> Option<RingElement> {
    if !m.is_square() || m.rows() == 0 {
        return None;
    }
    let f = m.get(0, 0).clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            let ok = if i == j { *e == f } else { e.is_zero() };
            if !ok {
                return None;
            }
        }
    }
    Some(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    /// 1-based descriptions of the violations found.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecReport {
    pub checks: Vec<InvariantCheck>,
}

impl SpecReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SpecReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "  [{mark}] {}", c.name)?;
            if !c.failures.is_empty() {
                write!(f, ": {}", c.failures.join("; "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn check(name: &str, failures: Vec<String>) -> InvariantCheck {
    InvariantCheck { name: name.into(), passed: failures.is_empty(), failures }
}

pub fn validate_auto_spec(spec: &AlgebraAutoSpec) -> SpecReport {
    let n = spec.n;
    let q = |i: usize| &spec.images[i][i];
    let zero = Dense::zeros(&spec.ring, n, n);

    let idem = (0..n)
        .filter(|&i| q(i).mul(q(i)) != *q(i))
        .map(|i| format!("q_{} is not idempotent", i + 1))
        .collect();

    let mut orth = Vec::new();
    for i in 0..n {
        for k in 0..n {
            if i != k && q(i).mul(q(k)) != zero {
                orth.push(format!("q_{} q_{} != 0", i + 1, k + 1));
            }
        }
    }

    let sum = (0..n).fold(zero.clone(), |acc, i| acc.add(q(i)));
    let complete = if sum.is_identity() { vec![] } else { vec!["sum of q_i is not Id".into()] };

    let mut table = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let prod = spec.images[a][b].mul(&spec.images[c][d]);
                    let expected = if b == c { &spec.images[a][d] } else { &zero };
                    if prod != *expected {
                        let rhs = if b == c { format!("phi(E_{}{})", a + 1, d + 1) } else { "0".into() };
                        table.push(format!(
                            "phi(E_{}{}) phi(E_{}{}) != {rhs}",
                            a + 1,
                            b + 1,
                            c + 1,
                            d + 1
                        ));
                    }
                }
            }
        }
    }

    SpecReport {
        checks: vec![
            check("idempotence", idem),
            check("orthogonality", orth),
            check("completeness", complete),
            check("multiplication-table", table),
        ],
    }
}

/// An invertible `U` with `U E_ij U^-1 = phi(E_ij)`; unique up to a central unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugator {
    pub u: Dense,
    pub inverse: Dense,
}

/// First `(i, j)` where `U E_ij U^-1 != phi(E_ij)`.
pub fn conjugation_mismatch(u: &Dense, u_inv: &Dense, spec: &AlgebraAutoSpec) -> Option<(usize, usize)> {
    let n = spec.n;
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| u.mul(&matrix_unit(&spec.ring, n, i, j)).mul(u_inv) != spec.images[i][j])
}

enum Coeffs {
    Integers,
    Field,
}

fn coeffs_of(ring: &Ring) -> Result<Coeffs, SkolemError> {
    match ring.as_ref() {
        RingDescriptor::Integers => Ok(Coeffs::Integers),
        RingDescriptor::Residue { .. } if ring.has_prime_field_coefficients() => Ok(Coeffs::Field),
        _ => Err(SkolemError::UnsupportedRing(ring.to_string())),
    }
}

fn int(e: &RingElement) -> BigInt {
    e.as_constant().expect("scalar ring")
}

/// Generator of the column space of an idempotent, normalized to be deterministic.
fn generator(q: &Dense, index: usize, coeffs: &Coeffs) -> Result<Vec<RingElement>, SkolemError> {
    let ring = q.ring();
    let n = q.rows();
    let col = |c: usize| -> Vec<RingElement> { (0..n).map(|r| q.get(r, c).clone()).collect() };
    let first = (0..n)
        .find(|&c| (0..n).any(|r| !q.get(r, c).is_zero()))
        .ok_or_else(|| SkolemError::NotFreeRankOne { index: index + 1, reason: "q is zero".into() })?;
    let c0 = col(first);
    let pivot = c0.iter().position(|e| !e.is_zero()).unwrap();
    let w: Vec<RingElement> = match coeffs {
        Coeffs::Field => {
            let inv = c0[pivot].inverse().expect("nonzero element of a field");
            c0.iter().map(|e| e * &inv).collect()
        }
        Coeffs::Integers => {
            let ints: Vec<BigInt> = c0.iter().map(int).collect();
            let mut g = content(&ints);
            if ints[pivot].is_negative() {
                g = -g;
            }
            ints.iter().map(|v| RingElement::from_bigint(ring, v / &g)).collect()
        }
    };
    for c in 0..n {
        let v = col(c);
        let k = match coeffs {
            Coeffs::Field => v[pivot].clone(),
            Coeffs::Integers => {
                let (k, r) = int(&v[pivot]).div_rem(&int(&w[pivot]));
                if !r.is_zero() {
                    return Err(SkolemError::NotFreeRankOne {
                        index: index + 1,
                        reason: format!("column {} is not a multiple of the primitive generator", c + 1),
                    });
                }
                RingElement::from_bigint(ring, k)
            }
        };
        if v.iter().zip(&w).any(|(a, b)| *a != &k * b) {
            return Err(SkolemError::NotFreeRankOne {
                index: index + 1,
                reason: format!("column {} is not a multiple of column {}", c + 1, first + 1),
            });
        }
    }
    Ok(w)
}

/// Recovers `U = U' U''`: `U'` has the generators of `im phi(E_ii)` as
/// columns, and `U'' = diag(s_i1)` absorbs the remaining scalars `s_ij`
/// defined by `U'^-1 phi(E_ij) U' = s_ij E_ij`.
pub fn recover_conjugator(spec: &AlgebraAutoSpec) -> Result<Conjugator, SkolemError> {
    let coeffs = coeffs_of(&spec.ring)?;
    let report = validate_auto_spec(spec);
    if !report.passed() {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.failures.first().cloned().unwrap_or_default()))
            .collect();
        return Err(SkolemError::InvalidSpec(failed.join(", ")));
    }
    let (ring, n) = (&spec.ring, spec.n);

    let mut u1 = Dense::zeros(ring, n, n);
    for i in 0..n {
        let w = generator(&spec.images[i][i], i, &coeffs)?;
        for (r, e) in w.into_iter().enumerate() {
            u1.set(r, i, e);
        }
    }
    let det = u1.det();
    if !det.is_unit() {
        return Err(SkolemError::SingularGenerators(det.to_string()));
    }
    let u1_inv = u1.inverse()?;

    let mut s = vec![vec![RingElement::zero(ring); n]; n];
    for (i, s_row) in s.iter_mut().enumerate() {
        for (j, slot) in s_row.iter_mut().enumerate() {
            let psi = u1_inv.mul(&spec.images[i][j]).mul(&u1);
            let v = psi.get(i, j).clone();
            if psi != matrix_unit(ring, n, i, j).scale(&v) {
                return Err(SkolemError::CheckFailed(format!(
                    "U'^-1 phi(E_{}{}) U' is not a multiple of E_{}{}",
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                )));
            }
            if !v.is_unit() {
                return Err(SkolemError::NotUnit { i: i + 1, j: j + 1, value: v.to_string() });
            }
            *slot = v;
        }
    }
    for i in 0..n {
        if !s[i][i].is_one() {
            return Err(SkolemError::CheckFailed(format!("s_{}{} = {} != 1", i + 1, i + 1, s[i][i])));
        }
        for j in 0..n {
            for k in 0..n {
                if &s[i][j] * &s[j][k] != s[i][k] {
                    return Err(SkolemError::CheckFailed(format!(
                        "cocycle s_{}{} s_{}{} != s_{}{}",
                        i + 1,
                        j + 1,
                        j + 1,
                        k + 1,
                        i + 1,
                        k + 1
                    )));
                }
            }
        }
    }

    // diag(v) E_ij diag(v)^-1 = (v_i / v_j) E_ij, and s_i1 / s_j1 = s_i1 s_1j = s_ij.
    let v: Vec<RingElement> = (0..n).map(|i| s[i][0].clone()).collect();
    let v_inv: Vec<RingElement> = (0..n).map(|i| s[0][i].clone()).collect();
    let u = u1.mul(&Dense::diagonal(ring, &v));
    let inverse = Dense::diagonal(ring, &v_inv).mul(&u1_inv);
    if let Some((i, j)) = conjugation_mismatch(&u, &inverse, spec) {
        return Err(SkolemError::CheckFailed(format!("U E_{}{} U^-1 != phi(E_{}{})", i + 1, j + 1, i + 1, j + 1)));
    }
    Ok(Conjugator { u, inverse })
}

type Rows = Vec<Vec<String>>;

/// File form of [`AlgebraAutoSpec`]: keys are `"i,j"`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutoSpecJson {
    pub n: usize,
    pub ring: RingJson,
    pub unit_images: BTreeMap<String, Rows>,
}

fn unit_key(s: &str, n: usize) -> Result<(usize, usize), SkolemError> {
    let bad = || SkolemError::InvalidSpec(format!("bad matrix-unit key `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 || i > n || j > n {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

impl AutoSpecJson {
    pub fn to_spec(&self) -> Result<AlgebraAutoSpec, SkolemError> {
        let ring = ring_from_json(&self.ring)?;
        let n = self.n;
        let mut images: Vec<Vec<Option<Dense>>> = vec![vec![None; n]; n];
        for (key, rows) in &self.unit_images {
            let (i, j) = unit_key(key, n)?;
            let parsed = rows
                .iter()
                .map(|r| r.iter().map(|e| parse_element(&ring, e)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            images[i][j] = Some(Dense::from_rows(&ring, parsed)?);
        }
        let mut full = Vec::with_capacity(n);
        for (i, row) in images.into_iter().enumerate() {
            let mut r = Vec::with_capacity(n);
            for (j, m) in row.into_iter().enumerate() {
                r.push(m.ok_or_else(|| SkolemError::InvalidSpec(format!("missing image of E_{}{}", i + 1, j + 1)))?);
            }
            full.push(r);
        }
        AlgebraAutoSpec::new(&ring, full)
    }

    pub fn from_spec(spec: &AlgebraAutoSpec) -> Self {
        let n = spec.n;
        let mut unit_images = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                unit_images.insert(format!("{},{}", i + 1, j + 1), spec.images[i][j].render());
            }
        }
        AutoSpecJson { n, ring: ring_to_json(&spec.ring), unit_images }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn zp(p: u64) -> Ring {
        Arc::new(RingDescriptor::residue(p).unwrap())
    }

    fn z() -> Ring {
        Arc::new(RingDescriptor::Integers)
    }

    #[test]
    fn central_scalar_examples() {
        let z = z();
        assert_eq!(central_scalar(&Dense::identity(&z, 3).scale(&RingElement::from_int(&z, 3))).unwrap(), RingElement::from_int(&z, 3));
        assert!(central_scalar(&matrix_unit(&z, 2, 0, 1)).is_none());
        assert!(central_scalar(&Dense::from_ints(&z, &[vec![1, 0], vec![0, 2]])).is_none());
    }

    #[test]
    fn identity_recovers_identity() {
        for r in [z(), zp(5)] {
            let c = recover_conjugator(&AlgebraAutoSpec::identity(&r, 4)).unwrap();
            assert!(c.u.is_identity());
        }
    }

    #[test]
    fn unipotent_over_z5() {
        let r = zp(5);
        let u_true = Dense::from_ints(&r, &[vec![1, 1], vec![0, 1]]);
        let spec = AlgebraAutoSpec::from_conjugator(&u_true).unwrap();
        assert_eq!(*spec.image(0, 0), Dense::from_ints(&r, &[vec![1, 4], vec![0, 0]]));
        let c = recover_conjugator(&spec).unwrap();
        assert!(conjugation_mismatch(&c.u, &c.inverse, &spec).is_none());
        let lambda = central_scalar(&c.u.mul(&u_true.inverse().unwrap())).unwrap();
        assert!(lambda.is_unit());
    }

    #[test]
    fn off_diagonal_scalars_need_row_base_point() {
        // phi = conj by diag(1,2,4) over Z/7: the scalars are non-symmetric, so a
        // diag(s_1j) correction would conjugate by the inverse.
        let r = zp(7);
        let u_true = Dense::from_ints(&r, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 4]]);
        let spec = AlgebraAutoSpec::from_conjugator(&u_true).unwrap();
        let c = recover_conjugator(&spec).unwrap();
        assert!(central_scalar(&c.u.mul(&u_true.inverse().unwrap())).is_some());
        let wrong = Dense::from_ints(&r, &[vec![1, 0, 0], vec![0, 4, 0], vec![0, 0, 2]]);
        assert!(conjugation_mismatch(&wrong, &wrong.inverse().unwrap(), &spec).is_some());
    }

    #[test]
    fn integer_conjugator() {
        let r = z();
        let u_true = Dense::from_ints(&r, &[vec![2, 3], vec![1, 2]]);
        let spec = AlgebraAutoSpec::from_conjugator(&u_true).unwrap();
        let c = recover_conjugator(&spec).unwrap();
        assert!(conjugation_mismatch(&c.u, &c.inverse, &spec).is_none());
        assert!(central_scalar(&c.u.mul(&u_true.inverse().unwrap())).unwrap().is_unit());
    }

    #[test]
    fn validation_failures() {
        let r = z();
        let mut spec = AlgebraAutoSpec::identity(&r, 2);
        *spec.image_mut(0, 0) = Dense::from_ints(&r, &[vec![2, 0], vec![0, 0]]);
        let rep = validate_auto_spec(&spec);
        let idem = rep.check("idempotence").unwrap();
        assert!(!idem.passed);
        assert_eq!(idem.failures, vec!["q_1 is not idempotent".to_string()]);

        let mut spec = AlgebraAutoSpec::identity(&r, 2);
        *spec.image_mut(1, 1) = Dense::zeros(&r, 2, 2);
        let rep = validate_auto_spec(&spec);
        assert!(!rep.check("completeness").unwrap().passed);
        assert!(matches!(recover_conjugator(&spec), Err(SkolemError::InvalidSpec(_))));

        assert!(validate_auto_spec(&AlgebraAutoSpec::identity(&r, 3)).passed());
    }

    #[test]
    fn rejects_composite_modulus() {
        let spec = AlgebraAutoSpec::identity(&zp(6), 2);
        assert!(matches!(recover_conjugator(&spec), Err(SkolemError::UnsupportedRing(_))));
    }

    #[test]
    fn json_roundtrip() {
        let r = zp(5);
        let spec = AlgebraAutoSpec::from_conjugator(&Dense::from_ints(&r, &[vec![1, 1], vec![0, 1]])).unwrap();
        let j = AutoSpecJson::from_spec(&spec);
        let text = serde_json::to_string(&j).unwrap();
        let back: AutoSpecJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_spec().unwrap(), spec);
        let mut missing = j.clone();
        missing.unit_images.remove("2,1");
        assert!(missing.to_spec().is_err());
    }
}
