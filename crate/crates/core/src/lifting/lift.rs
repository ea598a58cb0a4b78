use crate::colfin::{
    first_mismatch, BlockPairing, ColFinMatrix, Dense, ElementaryForm, Form, IndexBijection,
    InvertibleColFin, SparseCol,
};
use crate::ring::{bezout, BezoutWitness, RingElement, RingHom};

use super::{paired_diag, unimodular_reduce, LiftError, ProofStep};

/// One factor of a lift word, over the source ring.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftFactor {
    pub matrix: ColFinMatrix,
    pub step: ProofStep,
}

/// A lift of `input` along `hom`: the product of `factors`, in order.
#[derive(Debug, Clone)]
pub struct LiftCertificate {
    pub hom: RingHom,
    pub input: ColFinMatrix,
    pub factors: Vec<LiftFactor>,
    pub verified_window: usize,
}

impl LiftCertificate {
    pub fn word_length(&self) -> usize {
        self.factors.len()
    }

    /// The lifted matrix with its inverse, both as factor products.
    pub fn lift(&self) -> Result<InvertibleColFin, LiftError> {
        word_product(&self.hom, &self.factors)
    }

    /// Certificate for `self.input * other.input` obtained by concatenating words.
    pub fn compose(&self, other: &LiftCertificate, window: usize) -> Result<Self, LiftError> {
        if self.hom.name() != other.hom.name() {
            return Err(LiftError::Unsupported("certificates use different homs".into()));
        }
        let input = ColFinMatrix::product(
            self.input.ring(),
            vec![self.input.clone(), other.input.clone()],
        )?;
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let w = window.max(self.verified_window).max(other.verified_window);
        check_lift(&self.hom, &input, &factors, w)?;
        Ok(LiftCertificate { hom: self.hom.clone(), input, factors, verified_window: w })
    }
}

pub(crate) fn word_product(
    hom: &RingHom,
    factors: &[LiftFactor],
) -> Result<InvertibleColFin, LiftError> {
    let ring = hom.source();
    let matrix = ColFinMatrix::product(ring, factors.iter().map(|f| f.matrix.clone()).collect())?;
    let inverses = factors
        .iter()
        .rev()
        .map(|f| f.matrix.invert().map(|i| i.inverse))
        .collect::<Result<Vec<_>, _>>()?;
    let inverse = ColFinMatrix::product(ring, inverses)?;
    Ok(InvertibleColFin { matrix, inverse })
}

/// Checks `hom(lift) = input` and `lift * lift^-1 = Id` on the `n x n` window.
pub(crate) fn check_lift(
    hom: &RingHom,
    input: &ColFinMatrix,
    factors: &[LiftFactor],
    n: usize,
) -> Result<(), LiftError> {
    let lift = word_product(hom, factors)?;
    let image = lift.matrix.map_hom(hom)?;
    if let Some((i, j)) = first_mismatch(&image, input, n) {
        return Err(LiftError::VerificationFailed(format!(
            "image of the lift differs from the input at ({i}, {j})"
        )));
    }
    let id = ColFinMatrix::product(hom.source(), vec![lift.matrix, lift.inverse])?;
    if !id.window(n).is_identity() {
        return Err(LiftError::VerificationFailed("lift times inverse is not the identity".into()));
    }
    Ok(())
}

// The input split into pieces that are lifted independently and multiplied.
enum Piece {
    /// `diag(M, Id)`.
    Finite(Dense),
    /// `V` on every block of size `k` from `offset` on.
    Tail { offset: usize, block: Dense },
    /// Already an elementary, permutation or sign matrix.
    Generator(ColFinMatrix),
}

fn unit_diagonal(entries: &[RingElement]) -> Result<Dense, LiftError> {
    for (i, e) in entries.iter().enumerate() {
        if !e.is_unit() {
            return Err(LiftError::Unsupported(format!("diagonal entry {i} = {e} is not a unit")));
        }
    }
    Ok(Dense::diagonal(entries[0].ring(), entries))
}

fn block_sum(blocks: &[Dense]) -> Dense {
    let n = blocks.iter().map(Dense::rows).sum();
    let mut d = Dense::zeros(blocks[0].ring(), n, n);
    let mut at = 0;
    for b in blocks {
        d.put(at, at, b);
        at += b.rows();
    }
    d
}

fn require_invertible(d: &Dense, what: &str) -> Result<(), LiftError> {
    d.inverse()
        .map(|_| ())
        .map_err(|e| LiftError::Unsupported(format!("{what} is not invertible: {e}")))
}

fn decompose(m: &ColFinMatrix, out: &mut Vec<Piece>) -> Result<(), LiftError> {
    match m.form() {
        Form::Identity => {}
        Form::FinitePerturbation { corner } => {
            require_invertible(corner, "corner")?;
            if !corner.is_identity() {
                out.push(Piece::Finite(corner.clone()));
            }
        }
        Form::ScalarDiagonal { prefix, tail } => {
            if !prefix.is_empty() {
                let d = unit_diagonal(prefix)?;
                if !d.is_identity() {
                    out.push(Piece::Finite(d));
                }
            }
            if !tail.is_unit() {
                return Err(LiftError::Unsupported(format!("diagonal tail {tail} is not a unit")));
            }
            if !tail.is_one() {
                let block = Dense::diagonal(tail.ring(), std::slice::from_ref(tail));
                out.push(Piece::Tail { offset: prefix.len(), block });
            }
        }
        Form::BlockDiagonal { prefix, tail } => {
            if !prefix.is_empty() {
                let d = block_sum(prefix);
                require_invertible(&d, "prefix block")?;
                if !d.is_identity() {
                    out.push(Piece::Finite(d));
                }
            }
            if let Some(t) = tail {
                require_invertible(t, "tail block")?;
                if !t.is_identity() {
                    let offset = prefix.iter().map(Dense::rows).sum();
                    out.push(Piece::Tail { offset, block: t.clone() });
                }
            }
        }
        Form::Elementary(_) | Form::Permutation(_) | Form::SignFlip(_) => {
            out.push(Piece::Generator(m.clone()))
        }
        Form::Product(fs) => {
            for f in fs {
                decompose(f, out)?;
            }
        }
    }
    Ok(())
}

// Bezout oracle, falling back on the first row of the known inverse.
fn witness_for(a: &[RingElement], m_inv: &Dense) -> Result<BezoutWitness, LiftError> {
    if let Some(w) = bezout(a) {
        return Ok(w);
    }
    let w = BezoutWitness { coefficients: (0..a.len()).map(|j| m_inv.get(0, j).clone()).collect() };
    if w.certifies(a) {
        Ok(w)
    } else {
        Err(LiftError::MissingWitness(format!("{a:?}")))
    }
}

/// Target-side word for `diag(M, Id)`:
/// `T E Q^-1 D_0 D_n Q`, where `T` undoes the column reduction of `M e_0`,
/// `E` peels the top row, `Q` rotates `0..=n`, and `D_0 D_n = diag(U, Id)`.
fn finite_word(m: &Dense) -> Result<Vec<(ColFinMatrix, ProofStep)>, LiftError> {
    let ring = m.ring();
    let n = m.rows();
    let m_inv = m
        .inverse()
        .map_err(|e| LiftError::Unsupported(format!("corner is not invertible: {e}")))?;
    let a: Vec<RingElement> = (0..n).map(|i| m.get(i, 0).clone()).collect();
    let witness = witness_for(&a, &m_inv)?;
    let reduce = unimodular_reduce(&a, &witness)?;

    let w_left = reduce.left_product()?;
    let c = ColFinMatrix::product(ring, vec![w_left, ColFinMatrix::finite_perturbation(m.clone())?])?
        .window(n + 1);
    debug_assert!((0..=n).all(|i| c.get(i, 0) == &if i == 0 {
        RingElement::one(ring)
    } else {
        RingElement::zero(ring)
    }));
    let u = c.submatrix(1, n + 1, 1, n + 1);
    let t = c.submatrix(0, 1, 1, n + 1);
    let u_inv = u.inverse().map_err(|e| LiftError::Unsupported(format!("reduced block: {e}")))?;
    let s = t.mul(&u_inv);

    let mut word = Vec::new();
    for f in &reduce.factors {
        let inv = f.factor.inverse.clone();
        word.push((inv, ProofStep::ColumnReduction));
    }
    let peel_cols = (1..=n)
        .map(|j| (j, SparseCol::from([(0, s.get(0, j - 1).clone())])))
        .collect();
    let peel = ColFinMatrix::elementary(ring, crate::colfin::IndexSet::range(1, n + 1), peel_cols)?;
    word.push((peel, ProofStep::PeelElementary));

    let rotate: Vec<usize> = std::iter::once(n).chain(0..n).collect();
    let q = IndexBijection::finite(rotate).map_err(LiftError::Unsupported)?;
    word.push((ColFinMatrix::permutation(ring, q.inverse())?, ProofStep::Rearrange));
    for pairing in [BlockPairing::Periodic { offset: 0, block: n }, BlockPairing::Periodic { offset: n, block: n }]
    {
        for f in paired_diag(&pairing, &u)? {
            word.push((f, ProofStep::Swindle));
        }
    }
    word.push((ColFinMatrix::permutation(ring, q)?, ProofStep::Rearrange));
    Ok(word)
}

/// Target-side word for `V` repeated on every block from `offset` on:
/// `S_0 S_1 Q S_0 S_1 Q`, where `S_0 S_1` is `V` on even blocks and `Q`
/// swaps even and odd blocks.
fn tail_word(offset: usize, v: &Dense) -> Result<Vec<(ColFinMatrix, ProofStep)>, LiftError> {
    let k = v.rows();
    let ring = v.ring();
    let mut half = Vec::new();
    for parity in 0..2 {
        for f in paired_diag(&BlockPairing::Chain { offset, block: k, parity }, v)? {
            half.push((f, ProofStep::Whitehead));
        }
    }
    let q = ColFinMatrix::permutation(
        ring,
        IndexBijection::PairSwap(BlockPairing::Periodic { offset, block: k }),
    )?;
    half.push((q, ProofStep::Rearrange));
    let mut word = half.clone();
    word.extend(half);
    Ok(word)
}

/// Target-side word of liftable generators whose product is `m`.
pub fn target_word(m: &ColFinMatrix) -> Result<Vec<(ColFinMatrix, ProofStep)>, LiftError> {
    let mut pieces = Vec::new();
    decompose(m, &mut pieces)?;
    let mut word = Vec::new();
    for p in pieces {
        match p {
            Piece::Finite(d) => word.extend(finite_word(&d)?),
            Piece::Tail { offset, block } => word.extend(tail_word(offset, &block)?),
            Piece::Generator(g) => {
                let step = match g.form() {
                    Form::Permutation(_) => ProofStep::Rearrange,
                    Form::Elementary(ElementaryForm::Paired { .. }) => ProofStep::Swindle,
                    _ => ProofStep::PeelElementary,
                };
                word.push((g, step));
            }
        }
    }
    Ok(word)
}

/// Lifts `p` along `hom` and verifies the result on a window of at least
/// `window` (and at least `offset + 2 period` for periodic inputs).
pub fn gl_lift(
    hom: &RingHom,
    p: &InvertibleColFin,
    window: usize,
) -> Result<LiftCertificate, LiftError> {
    if p.matrix.ring() != hom.target() {
        return Err(LiftError::Unsupported(format!(
            "matrix is over {}, the hom targets {}",
            p.matrix.ring(),
            hom.target()
        )));
    }
    if !hom.is_surjective() || !hom.has_section() {
        return Err(LiftError::Unsupported(format!(
            "hom `{}` is not registered as a surjection with a section",
            hom.name()
        )));
    }
    let mut n = window.max(1);
    if let Some((o, per)) = p.matrix.eventual_profile() {
        n = n.max(o + 2 * per);
    }
    let word = target_word(&p.matrix)?;
    let check = ColFinMatrix::product(p.matrix.ring(), vec![p.matrix.clone(), p.inverse.clone()])?;
    if !check.window(n).is_identity() {
        return Err(LiftError::Unsupported("the supplied inverse is not an inverse".into()));
    }
    let mut factors = Vec::new();
    for (g, step) in word {
        factors.push(LiftFactor { matrix: g.map_section(hom)?, step });
    }
    check_lift(hom, &p.matrix, &factors, n)?;
    Ok(LiftCertificate { hom: hom.clone(), input: p.matrix.clone(), factors, verified_window: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{builtin_registry, parse_element};

    #[test]
    fn flagship_small_window() {
        let reg = builtin_registry();
        let h = reg.get("zxy_to_laurent").unwrap();
        let u = parse_element(h.target(), "u").unwrap();
        let p = ColFinMatrix::scalar_diagonal(h.target(), vec![], u).unwrap();
        let cert = gl_lift(h, &p.invert().unwrap(), 16).unwrap();
        assert_eq!(cert.verified_window, 16);
        assert!(cert.factors.iter().all(|f| f.matrix.is_liftable_generator()));
    }

    #[test]
    fn finite_over_z5() {
        let reg = builtin_registry();
        let h = reg.get("z_to_z5").unwrap();
        let d = Dense::from_ints(h.target(), &[vec![2, 0], vec![0, 3]]);
        let p = ColFinMatrix::finite_perturbation(d).unwrap();
        let cert = gl_lift(h, &p.invert().unwrap(), 12).unwrap();
        assert!(cert.word_length() > 0);
    }

    #[test]
    fn identity_lifts_to_identity() {
        let reg = builtin_registry();
        let h = reg.get("zxy_to_laurent").unwrap();
        let p = ColFinMatrix::identity(h.target());
        let cert = gl_lift(h, &p.invert().unwrap(), 8).unwrap();
        assert_eq!(cert.word_length(), 0);
        assert_eq!(cert.lift().unwrap().matrix, ColFinMatrix::identity(h.source()));
    }

    #[test]
    fn non_unit_diagonal_is_unsupported() {
        let reg = builtin_registry();
        let h = reg.get("zxy_to_laurent").unwrap();
        let two = parse_element(h.target(), "u + 1").unwrap();
        let p = ColFinMatrix::scalar_diagonal(h.target(), vec![], two).unwrap();
        let inv = InvertibleColFin { matrix: p.clone(), inverse: p };
        match gl_lift(h, &inv, 8) {
            Err(LiftError::Unsupported(msg)) => assert!(msg.contains("u + 1")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
