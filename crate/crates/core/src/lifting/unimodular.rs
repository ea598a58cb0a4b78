use crate::colfin::{ColFinMatrix, IndexBijection};
use crate::ring::{BezoutWitness, RingElement};

use super::{ElementaryWord, LiftError, ProofStep, Sidedness};

/// Word over `GL_{n+1}` sending `(a_1, ..., a_n, 0)` to `e_0`: first
/// `x_n += c_i x_i` for each `i`, then `x_i -= a_i x_n`, then the
/// transposition of `0` and `n`.
pub fn unimodular_reduce(
    a: &[RingElement],
    witness: &BezoutWitness,
) -> Result<ElementaryWord, LiftError> {
    let Some(first) = a.first() else {
        return Err(LiftError::Unsupported("empty vector".into()));
    };
    if !witness.certifies(a) {
        return Err(LiftError::BadWitness);
    }
    let ring = first.ring().clone();
    let n = a.len();
    let mut word = ElementaryWord::new(&ring);
    let step = ProofStep::ColumnReduction;
    for (i, c) in witness.coefficients.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        word.push(ColFinMatrix::elementary_entry(&ring, n, i, c.clone())?, Sidedness::Left, step)?;
    }
    for (i, ai) in a.iter().enumerate().filter(|(_, ai)| !ai.is_zero()) {
        word.push(ColFinMatrix::elementary_entry(&ring, i, n, -ai.clone())?, Sidedness::Left, step)?;
    }
    let swap = ColFinMatrix::permutation(&ring, IndexBijection::transposition(0, n))?;
    word.push(swap, Sidedness::Left, step)?;
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colfin::SparseCol;
    use crate::ring::{parse_element, CoeffRing, RingDescriptor};
    use std::sync::Arc;

    fn padded(a: &[RingElement]) -> SparseCol {
        a.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
    }

    #[test]
    fn laurent_unit() {
        let r = Arc::new(RingDescriptor::laurent("u", CoeffRing::Integers).unwrap());
        let a = vec![parse_element(&r, "u").unwrap()];
        let w = BezoutWitness { coefficients: vec![parse_element(&r, "u^-1").unwrap()] };
        let word = unimodular_reduce(&a, &w).unwrap();
        assert_eq!(word.len(), 3);
        let out = word.apply_vector(&padded(&a));
        assert_eq!(out, SparseCol::from([(0, RingElement::one(&r))]));
    }

    #[test]
    fn integers_two_three() {
        let z = Arc::new(RingDescriptor::Integers);
        let a = vec![RingElement::from_int(&z, 2), RingElement::from_int(&z, 3)];
        let w = BezoutWitness {
            coefficients: vec![RingElement::from_int(&z, -1), RingElement::from_int(&z, 1)],
        };
        let word = unimodular_reduce(&a, &w).unwrap();
        assert_eq!(word.apply_vector(&padded(&a)), SparseCol::from([(0, RingElement::one(&z))]));
        let bad = BezoutWitness {
            coefficients: vec![RingElement::from_int(&z, 1), RingElement::from_int(&z, 1)],
        };
        assert!(matches!(unimodular_reduce(&a, &bad), Err(LiftError::BadWitness)));
    }
}
