//! Exact arithmetic over `Z`, `Z/m`, polynomial rings and Laurent rings,
//! ring homomorphisms with zero-preserving sections, Bezout witnesses and
//! a small expression parser.

mod bezout;
mod descriptor;
mod element;
mod hom;
mod json;
mod parse;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use bezout::{bezout, BezoutWitness};
pub use descriptor::{CoeffRing, RingDescriptor};
pub use element::{Monomial, Payload, Ring, RingElement};
pub use hom::{builtin_registry, HomRegistry, RingHom, SectionRule};
pub use json::{ring_from_json, ring_to_json, ElementJson, HomJson, RingJson, SectionJson};
pub use parse::parse_element;

pub(crate) use element::content;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring mismatch: {left} vs {right}")]
    Mismatch { left: String, right: String },
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent outside a Laurent ring")]
    NegativeExponent,
    #[error("`{0}` is not invertible")]
    NotInvertible(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("no section rule covers `{0}`")]
    NoSection(String),
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g` and `g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(240, 46), (-7, 3), (0, 5), (6, 0), (-4, -6)] {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            let (g, x, y) = ext_gcd(&a, &b);
            assert!(!g.is_negative());
            assert_eq!(&a * &x + &b * &y, g);
        }
    }
}
