use serde::{Deserialize, Serialize};

use crate::colfin::{ColFinError, ColFinMatrix, Dense, InvertibleColFin, SparseCol};
use crate::ring::Ring;

/// Which side a factor multiplies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    Left,
    Right,
}

/// The construction step a factor comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofStep {
    ColumnReduction,
    Rearrange,
    PeelElementary,
    Whitehead,
    Swindle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordFactor {
    pub factor: InvertibleColFin,
    pub side: Sidedness,
    pub step: ProofStep,
}

/// A list of invertible factors. Left factors act in list order by
/// left multiplication, right factors in list order by right
/// multiplication: `apply_to(m) = L_k ... L_1 m R_1 ... R_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryWord {
    pub ring: Ring,
    pub factors: Vec<WordFactor>,
}

impl ElementaryWord {
    pub fn new(ring: &Ring) -> Self {
        ElementaryWord { ring: ring.clone(), factors: Vec::new() }
    }

    pub fn push(
        &mut self,
        m: ColFinMatrix,
        side: Sidedness,
        step: ProofStep,
    ) -> Result<(), ColFinError> {
        let factor = m.invert()?;
        self.factors.push(WordFactor { factor, side, step });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Every factor is elementary, a permutation or a sign flip.
    pub fn is_liftable(&self) -> bool {
        self.factors.iter().all(|f| f.factor.matrix.is_liftable_generator())
    }

    fn side_product(&self, side: Sidedness) -> Result<ColFinMatrix, ColFinError> {
        let mut ms: Vec<ColFinMatrix> = self
            .factors
            .iter()
            .filter(|f| f.side == side)
            .map(|f| f.factor.matrix.clone())
            .collect();
        if side == Sidedness::Left {
            ms.reverse();
        }
        ColFinMatrix::product(&self.ring, ms)
    }

    /// `L_k ... L_1`.
    pub fn left_product(&self) -> Result<ColFinMatrix, ColFinError> {
        self.side_product(Sidedness::Left)
    }

    /// `R_1 ... R_k`.
    pub fn right_product(&self) -> Result<ColFinMatrix, ColFinError> {
        self.side_product(Sidedness::Right)
    }

    pub fn apply_to(&self, m: &ColFinMatrix) -> Result<ColFinMatrix, ColFinError> {
        ColFinMatrix::product(&self.ring, vec![self.left_product()?, m.clone(), self.right_product()?])
    }

    /// Left factors applied in order to a column vector.
    pub fn apply_vector(&self, v: &SparseCol) -> SparseCol {
        self.factors
            .iter()
            .filter(|f| f.side == Sidedness::Left)
            .fold(v.clone(), |acc, f| f.factor.matrix.apply(&acc))
    }

    /// Dense evaluation of `apply_to` on an `n x n` matrix padded by the identity.
    pub fn apply_dense(&self, d: &Dense, n: usize) -> Result<Dense, ColFinError> {
        let m = ColFinMatrix::finite_perturbation(d.clone())?;
        Ok(self.apply_to(&m)?.window(n))
    }
}
