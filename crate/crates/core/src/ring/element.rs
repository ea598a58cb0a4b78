use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::descriptor::{modulo, RingDescriptor};
use super::{ext_gcd, RingError};

/// Shared handle to a ring descriptor.
pub type Ring = Arc<RingDescriptor>;

/// Exponent vector, ordered graded-lexicographically by declared variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical payload. Scalars (for `Z`, `Z/m`) are reduced into `[0, m)`;
/// term maps never hold a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Payload {
    Scalar(BigInt),
    Terms(BTreeMap<Monomial, BigInt>),
}

/// An element of one of the supported rings, always in normal form.
#[derive(Clone)]
pub struct RingElement {
    ring: Ring,
    payload: Payload,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.payload == other.payload
    }
}

impl Eq for RingElement {}

impl Hash for RingElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.payload.hash(state);
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

impl RingElement {
    pub fn zero(ring: &Ring) -> Self {
        let payload = if ring.has_monomials() {
            Payload::Terms(BTreeMap::new())
        } else {
            Payload::Scalar(BigInt::zero())
        };
        RingElement { ring: ring.clone(), payload }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: &Ring, n: impl Into<BigInt>) -> Self {
        Self::from_bigint(ring, n.into())
    }

    pub fn from_bigint(ring: &Ring, n: BigInt) -> Self {
        let coeff = &**ring;
        let c = coeff.reduce(n);
        if ring.has_monomials() {
            let nvars = ring.variables().len();
            let mut terms = BTreeMap::new();
            if !c.is_zero() {
                terms.insert(Monomial::one(nvars), c);
            }
            RingElement { ring: ring.clone(), payload: Payload::Terms(terms) }
        } else {
            RingElement { ring: ring.clone(), payload: Payload::Scalar(c) }
        }
    }

    /// The generator named `name`.
    pub fn var(ring: &Ring, name: &str) -> Result<Self, RingError> {
        let idx = ring
            .var_index(name)
            .ok_or_else(|| RingError::UnknownVariable(name.to_string()))?;
        Ok(Self::monomial(ring, Monomial(unit_vec(ring.variables().len(), idx, 1)), 1.into()))
    }

    /// `c * m`, normalised.
    pub fn monomial(ring: &Ring, m: Monomial, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        let c = ring.reduce(c);
        if !c.is_zero() {
            terms.insert(m, c);
        }
        RingElement { ring: ring.clone(), payload: Payload::Terms(terms) }
    }

    /// Builds an element from raw terms, renormalising coefficients.
    pub fn from_terms(
        ring: &Ring,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Result<Self, RingError> {
        if !ring.has_monomials() {
            return Err(RingError::InvalidDescriptor(format!("{ring} has no monomials")));
        }
        let nvars = ring.variables().len();
        let coeff = &**ring;
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            if m.0.len() != nvars {
                return Err(RingError::InvalidDescriptor("monomial arity mismatch".into()));
            }
            if !ring.is_laurent() && m.0.iter().any(|&e| e < 0) {
                return Err(RingError::NegativeExponent);
            }
            *out.entry(m).or_insert_with(BigInt::zero) += c;
        }
        let terms = out
            .into_iter()
            .map(|(m, c)| (m, coeff.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(RingElement { ring: ring.clone(), payload: Payload::Terms(terms) })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    /// Term map for polynomial and Laurent elements.
    pub fn terms(&self) -> Option<&BTreeMap<Monomial, BigInt>> {
        match &self.payload {
            Payload::Terms(t) => Some(t),
            Payload::Scalar(_) => None,
        }
    }

    /// Re-applies normalisation; canonical payloads are fixed points.
    pub fn renormalize(&self) -> Self {
        match &self.payload {
            Payload::Scalar(c) => Self::from_bigint(&self.ring, c.clone()),
            Payload::Terms(t) => Self::from_terms(&self.ring, t.clone()).expect("canonical terms"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::Scalar(c) => c.is_zero(),
            Payload::Terms(t) => t.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// The constant value, if this element is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match &self.payload {
            Payload::Scalar(c) => Some(c.clone()),
            Payload::Terms(t) => match t.len() {
                0 => Some(BigInt::zero()),
                1 => {
                    let (m, c) = t.iter().next().unwrap();
                    m.is_one().then(|| c.clone())
                }
                _ => None,
            },
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), RingError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::Mismatch { left: self.ring.to_string(), right: other.ring.to_string() })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same(other)?;
        Ok(self.combine(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same(other)?;
        Ok(self.product(other))
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let coeff = &*self.ring;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Scalar(a), Payload::Scalar(b)) => {
                Payload::Scalar(coeff.reduce(if subtract { a - b } else { a + b }))
            }
            (Payload::Terms(a), Payload::Terms(b)) => {
                let mut out = a.clone();
                for (m, c) in b {
                    let entry = out.entry(m.clone()).or_insert_with(BigInt::zero);
                    let v = if subtract { &*entry - c } else { &*entry + c };
                    let v = coeff.reduce(v);
                    if v.is_zero() {
                        out.remove(m);
                    } else {
                        *out.get_mut(m).unwrap() = v;
                    }
                }
                Payload::Terms(out)
            }
            _ => unreachable!("payload kind is determined by the ring"),
        };
        RingElement { ring: self.ring.clone(), payload }
    }

    fn product(&self, other: &Self) -> Self {
        let coeff = &*self.ring;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Scalar(a), Payload::Scalar(b)) => Payload::Scalar(coeff.reduce(a * b)),
            (Payload::Terms(a), Payload::Terms(b)) => {
                let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
                for (ma, ca) in a {
                    for (mb, cb) in b {
                        *out.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
                    }
                }
                Payload::Terms(
                    out.into_iter()
                        .map(|(m, c)| (m, coeff.reduce(c)))
                        .filter(|(_, c)| !c.is_zero())
                        .collect(),
                )
            }
            _ => unreachable!("payload kind is determined by the ring"),
        };
        RingElement { ring: self.ring.clone(), payload }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        self.product(&Self::from_bigint(&self.ring, k.clone()))
    }

    /// The inverse, when this element is a unit of its ring.
    pub fn inverse(&self) -> Option<Self> {
        match self.ring.as_ref() {
            RingDescriptor::Integers => {
                let c = self.as_constant()?;
                (c.abs().is_one()).then(|| self.clone())
            }
            RingDescriptor::Residue { modulus } => {
                let c = self.as_constant()?;
                let inv = mod_inverse(&c, modulus)?;
                Some(Self::from_bigint(&self.ring, inv))
            }
            RingDescriptor::Polynomial { coeff, .. } => {
                // Only constant units are detected; over Z/m with m composite
                // a unit may also carry nilpotent higher terms.
                let c = self.as_constant()?;
                let inv = coeff_inverse(&c, coeff.modulus())?;
                Some(Self::from_bigint(&self.ring, inv))
            }
            RingDescriptor::Laurent { coeff, .. } => {
                let t = self.terms()?;
                if t.len() != 1 {
                    return None;
                }
                let (m, c) = t.iter().next().unwrap();
                let inv = coeff_inverse(c, coeff.modulus())?;
                let m_inv = Monomial(m.0.iter().map(|e| -e).collect());
                Some(Self::monomial(&self.ring, m_inv, inv))
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow(&self, e: i64) -> Result<Self, RingError> {
        let base = if e < 0 {
            self.inverse().ok_or(RingError::NotInvertible(self.to_string()))?
        } else {
            self.clone()
        };
        let mut acc = Self::one(&self.ring);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.product(&sq);
            }
            sq = sq.product(&sq);
            k >>= 1;
        }
        Ok(acc)
    }
}

fn unit_vec(n: usize, idx: usize, val: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[idx] = val;
    v
}

fn coeff_inverse(c: &BigInt, modulus: Option<&BigInt>) -> Option<BigInt> {
    match modulus {
        None => c.abs().is_one().then(|| c.clone()),
        Some(m) => mod_inverse(c, m),
    }
}

pub(crate) fn mod_inverse(c: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, x, _) = ext_gcd(c, m);
    g.is_one().then(|| modulo(x, m))
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &'a RingElement) -> RingElement {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &'a RingElement) -> RingElement {
        self.try_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &'a RingElement) -> RingElement {
        self.try_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::zero(&self.ring).combine(self, true)
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Scalar(c) => write!(f, "{c}"),
            Payload::Terms(t) => {
                if t.is_empty() {
                    return write!(f, "0");
                }
                let vars = self.ring.variables();
                for (i, (m, c)) in t.iter().rev().enumerate() {
                    let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
                    match (i, neg) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    let mut factors: Vec<String> = Vec::new();
                    if !mag.is_one() || m.is_one() {
                        factors.push(mag.to_string());
                    }
                    for (v, &e) in vars.iter().zip(&m.0) {
                        match e {
                            0 => {}
                            1 => factors.push(v.to_string()),
                            _ => factors.push(format!("{v}^{e}")),
                        }
                    }
                    write!(f, "{}", factors.join("*"))?;
                }
                Ok(())
            }
        }
    }
}

/// `gcd` of a list of integers together with its content sign convention.
pub(crate) fn content(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CoeffRing;

    fn zxy() -> Ring {
        Arc::new(RingDescriptor::polynomial(&["x", "y"], CoeffRing::Integers).unwrap())
    }

    fn zu() -> Ring {
        Arc::new(RingDescriptor::laurent("u", CoeffRing::Integers).unwrap())
    }

    #[test]
    fn integer_and_residue_arithmetic() {
        let z = Arc::new(RingDescriptor::Integers);
        assert_eq!(&RingElement::from_int(&z, 2) + &RingElement::from_int(&z, 3), RingElement::from_int(&z, 5));
        let z5 = Arc::new(RingDescriptor::residue(5).unwrap());
        let s = &RingElement::from_int(&z5, 3) + &RingElement::from_int(&z5, 4);
        assert_eq!(s.as_constant(), Some(BigInt::from(2)));
        let p = &RingElement::from_int(&z5, 2) * &RingElement::from_int(&z5, 3);
        assert!(p.is_one());
        assert_eq!(RingElement::from_int(&z5, 3).inverse().unwrap().as_constant(), Some(BigInt::from(2)));
        assert_eq!(RingElement::from_int(&z5, -1).as_constant(), Some(BigInt::from(4)));
    }

    #[test]
    fn polynomial_cancellation() {
        let r = zxy();
        let x = RingElement::var(&r, "x").unwrap();
        let y = RingElement::var(&r, "y").unwrap();
        let one = RingElement::one(&r);
        let xy = &x * &y;
        let e = &(&xy - &one) + &one;
        assert_eq!(e, xy);
        assert_eq!(e.terms().unwrap().len(), 1);
        assert!(x.inverse().is_none());
        assert_eq!(RingElement::from_int(&r, -1).inverse(), Some(RingElement::from_int(&r, -1)));
    }

    #[test]
    fn laurent_units() {
        let r = zu();
        let u = RingElement::var(&r, "u").unwrap();
        let ui = u.inverse().unwrap();
        assert!((&u * &ui).is_one());
        assert_eq!(ui.to_string(), "u^-1");
        let two_u = u.scale(&BigInt::from(2));
        assert!(two_u.inverse().is_none());
        assert!((&u + &RingElement::one(&r)).inverse().is_none());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = RingElement::one(&zxy());
        let b = RingElement::one(&zu());
        assert!(matches!(a.try_add(&b), Err(RingError::Mismatch { .. })));
    }

    #[test]
    fn rendering_order_is_graded_lex() {
        let r = zxy();
        let x = RingElement::var(&r, "x").unwrap();
        let y = RingElement::var(&r, "y").unwrap();
        let e = &(&(&x * &x) + &y) - &RingElement::one(&r);
        assert_eq!(e.to_string(), "x^2 + y - 1");
        let e2 = &(&x * &y) + &(&x * &x);
        assert_eq!(e2.to_string(), "x^2 + x*y");
    }
}
