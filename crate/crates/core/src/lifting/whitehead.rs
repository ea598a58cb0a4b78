use std::collections::BTreeMap;

use crate::colfin::{ColFinMatrix, Dense, IndexBijection, IndexSet, SparseCol};

use super::{ElementaryWord, LiftError, ProofStep, Sidedness};

// Elementary matrix with block `k` placed at rows `row0..`, columns `col0..`.
fn block_elementary(k: &Dense, row0: usize, col0: usize) -> Result<ColFinMatrix, LiftError> {
    let n = k.rows();
    let mut cols = BTreeMap::new();
    for j in 0..n {
        let col: SparseCol = (0..n)
            .filter(|&i| !k.get(i, j).is_zero())
            .map(|i| (row0 + i, k.get(i, j).clone()))
            .collect();
        cols.insert(col0 + j, col);
    }
    Ok(ColFinMatrix::elementary(k.ring(), IndexSet::range(col0, col0 + n), cols)?)
}

/// Word over `GL_{2k}` with `L diag(A, B) R_1 R_2 P S = diag(AB, I)`:
/// `R_1 = [[I,0],[B^-1,I]]`, `R_2 = [[I,-B],[0,I]]`, `P` swaps the two block
/// columns, `S` negates the first block, and `L = [[I,-A],[0,I]]`.
pub fn whitehead_word(a: &Dense, b: &Dense) -> Result<ElementaryWord, LiftError> {
    let k = a.rows();
    if !a.is_square() || !b.is_square() || b.rows() != k || a.ring() != b.ring() {
        return Err(LiftError::Unsupported("blocks must be square of equal size".into()));
    }
    a.inverse().map_err(|e| LiftError::Unsupported(format!("A is not invertible: {e}")))?;
    let b_inv =
        b.inverse().map_err(|e| LiftError::Unsupported(format!("B is not invertible: {e}")))?;
    let ring = a.ring();
    let step = ProofStep::Whitehead;
    let mut word = ElementaryWord::new(ring);
    word.push(block_elementary(&b_inv, k, 0)?, Sidedness::Right, step)?;
    word.push(block_elementary(&b.neg(), 0, k)?, Sidedness::Right, step)?;
    let swap: Vec<usize> = (k..2 * k).chain(0..k).collect();
    let swap = IndexBijection::finite(swap).map_err(LiftError::Unsupported)?;
    word.push(ColFinMatrix::permutation(ring, swap)?, Sidedness::Right, step)?;
    word.push(ColFinMatrix::sign_flip(ring, IndexSet::range(0, k))?, Sidedness::Right, step)?;
    word.push(block_elementary(&a.neg(), 0, k)?, Sidedness::Left, step)?;
    Ok(word)
}
