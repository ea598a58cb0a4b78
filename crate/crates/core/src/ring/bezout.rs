use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ext_gcd, RingElement};

/// Coefficients `c` with `sum c_i a_i = 1` for an associated vector `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutWitness {
    pub coefficients: Vec<RingElement>,
}

impl BezoutWitness {
    /// Exact check of `sum c_i a_i = 1`.
    pub fn certifies(&self, a: &[RingElement]) -> bool {
        if a.is_empty() || a.len() != self.coefficients.len() {
            return false;
        }
        let ring = a[0].ring();
        let mut acc = RingElement::zero(ring);
        for (c, x) in self.coefficients.iter().zip(a) {
            match c.try_mul(x).and_then(|p| acc.try_add(&p)) {
                Ok(s) => acc = s,
                Err(_) => return false,
            }
        }
        acc.is_one()
    }
}

/// Tries the built-in oracles in order: a unit entry, extended Euclid over
/// `Z`, extended Euclid against the modulus over `Z/m`, and the same two for
/// vectors of constants in a polynomial or Laurent ring. Returns `None`
/// otherwise; the result is always checked before it is returned.
pub fn bezout(a: &[RingElement]) -> Option<BezoutWitness> {
    let first = a.first()?;
    let ring = first.ring().clone();
    if a.iter().any(|x| x.ring() != &ring) {
        return None;
    }
    let zero = RingElement::zero(&ring);
    let candidate = if let Some((i, inv)) =
        a.iter().enumerate().find_map(|(i, x)| x.inverse().map(|inv| (i, inv)))
    {
        let mut cs = vec![zero; a.len()];
        cs[i] = inv;
        Some(cs)
    } else {
        let ints: Option<Vec<BigInt>> = a.iter().map(RingElement::as_constant).collect();
        let ints = ints?;
        let modulus = ring.characteristic();
        integer_combination(&ints, modulus.as_ref()).map(|cs| {
            cs.into_iter().map(|c| RingElement::from_bigint(&ring, c)).collect()
        })
    };
    let w = BezoutWitness { coefficients: candidate? };
    w.certifies(a).then_some(w)
}

// Iterated extended Euclid over Z on `values` (and the modulus, if any).
fn integer_combination(values: &[BigInt], modulus: Option<&BigInt>) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    let mut cs: Vec<BigInt> = Vec::with_capacity(values.len());
    for v in values.iter().chain(modulus) {
        let (ng, x, y) = ext_gcd(&g, v);
        for c in cs.iter_mut() {
            *c *= &x;
        }
        cs.push(y);
        g = ng;
    }
    if !g.is_one() {
        return None;
    }
    cs.truncate(values.len());
    Some(cs)
}
