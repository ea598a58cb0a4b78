use crate::colfin::{BlockPairing, ColFinMatrix, Dense, IndexBijection, IndexSet, Side};

use super::LiftError;

/// Five factors whose product is `U` on every first block of `pairing`,
/// `U^-1` on its partner, and the identity on unpaired blocks:
/// `[[I,U],[0,I]] diag(-I,I) swap [[I,U^-1],[0,I]] [[I,0],[-U,I]]`.
pub fn paired_diag(pairing: &BlockPairing, u: &Dense) -> Result<Vec<ColFinMatrix>, LiftError> {
    if !u.is_square() || u.rows() != pairing.block() {
        return Err(LiftError::Unsupported("block size differs from the pairing".into()));
    }
    let u_inv = u.inverse().map_err(|e| LiftError::Unsupported(format!("block: {e}")))?;
    let ring = u.ring();
    Ok(vec![
        ColFinMatrix::paired_elementary(pairing.clone(), Side::Second, u.clone())?,
        ColFinMatrix::sign_flip(ring, IndexSet::PairSide { pairing: pairing.clone(), side: Side::First })?,
        ColFinMatrix::permutation(ring, IndexBijection::PairSwap(pairing.clone()))?,
        ColFinMatrix::paired_elementary(pairing.clone(), Side::Second, u_inv)?,
        ColFinMatrix::paired_elementary(pairing.clone(), Side::First, u.neg())?,
    ])
}

/// Factors of `diag(U, U^-1, U, U^-1, ...)`; empty when `U` is the identity.
pub fn swindle_factorization(u: &Dense) -> Result<Vec<ColFinMatrix>, LiftError> {
    if u.is_identity() {
        return Ok(Vec::new());
    }
    paired_diag(&BlockPairing::Periodic { offset: 0, block: u.rows() }, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_element, CoeffRing, RingDescriptor};
    use std::sync::Arc;

    #[test]
    fn laurent_scalar() {
        let r = Arc::new(RingDescriptor::laurent("u", CoeffRing::Integers).unwrap());
        let u = Dense::diagonal(&r, &[parse_element(&r, "u").unwrap()]);
        let fs = swindle_factorization(&u).unwrap();
        assert_eq!(fs.len(), 5);
        let p = ColFinMatrix::product(&r, fs).unwrap();
        let w = p.window(32);
        for i in 0..32 {
            let want = if i % 2 == 0 { "u" } else { "u^-1" };
            assert_eq!(w.get(i, i).to_string(), want);
        }
        let d = ColFinMatrix::block_diagonal(&r, vec![], Some(Dense::diagonal(
            &r,
            &[parse_element(&r, "u").unwrap(), parse_element(&r, "u^-1").unwrap()],
        )))
        .unwrap();
        assert!(p.eq_on_window(&d, 32));
    }

    #[test]
    fn chain_pairing_diag() {
        let z = Arc::new(RingDescriptor::Integers);
        let u = Dense::from_ints(&z, &[vec![1, 1], vec![0, 1]]);
        let pairing = BlockPairing::Chain { offset: 1, block: 2, parity: 1 };
        let p = ColFinMatrix::product(&z, paired_diag(&pairing, &u).unwrap()).unwrap();
        let u_inv = u.inverse().unwrap();
        for b in 0..10 {
            let start = pairing.block_start(b);
            let want = match pairing.role(b) {
                None => Dense::identity(&z, 2),
                Some((Side::First, _)) => u.clone(),
                Some((Side::Second, _)) => u_inv.clone(),
            };
            assert_eq!(p.diagonal_block(start, 2), want, "block {b}");
        }
    }
}
