use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::ring::{Ring, RingElement, RingError, RingHom};

/// A dense matrix over a ring, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Dense {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<RingElement>,
}

impl fmt::Debug for Dense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over {} {:?}", self.rows, self.cols, self.ring, self.render())
    }
}

impl Dense {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Dense { ring: ring.clone(), rows, cols, data: vec![RingElement::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, RingElement::one(ring));
        }
        m
    }

    /// Builds from rows; every entry must live in `ring`.
    pub fn from_rows(ring: &Ring, rows: Vec<Vec<RingElement>>) -> Result<Self, RingError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(RingError::InvalidDescriptor("ragged matrix rows".into()));
            }
            for e in row {
                if e.ring() != ring {
                    return Err(RingError::Mismatch {
                        left: e.ring().to_string(),
                        right: ring.to_string(),
                    });
                }
                data.push(e);
            }
        }
        Ok(Dense { ring: ring.clone(), rows: r, cols: c, data })
    }

    pub fn from_ints(ring: &Ring, rows: &[Vec<i64>]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| RingElement::from_int(ring, v)).collect())
            .collect();
        Self::from_rows(ring, rows).expect("integer rows")
    }

    pub fn diagonal(ring: &Ring, entries: &[RingElement]) -> Self {
        let mut m = Self::zeros(ring, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        if !self.ring.has_monomials() {
            return self.mul_scalar(other);
        }
        let mut out = Dense::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    // Z and Z/m: accumulate each entry as an integer and reduce once.
    fn mul_scalar(&self, other: &Dense) -> Dense {
        let ints = |d: &Dense| -> Vec<BigInt> {
            d.data.iter().map(|e| e.as_constant().expect("scalar ring")).collect()
        };
        let (a, b) = (ints(self), ints(other));
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    let (x, y) = (&a[i * self.cols + k], &b[k * other.cols + j]);
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
                data.push(RingElement::from_bigint(&self.ring, acc));
            }
        }
        Dense { ring: self.ring.clone(), rows: self.rows, cols: other.cols, data }
    }

    pub fn add(&self, other: &Dense) -> Dense {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Dense) -> Dense {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Dense {
        self.map(|e| -e.clone())
    }

    pub fn scale(&self, k: &RingElement) -> Dense {
        self.map(|e| e * k)
    }

    fn zip(&self, other: &Dense, f: impl Fn(&RingElement, &RingElement) -> RingElement) -> Dense {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Dense { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> Dense {
        Dense {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entrywise image under a ring map.
    pub fn map_hom(&self, h: &RingHom) -> Result<Dense, RingError> {
        let data = self.data.iter().map(|e| h.apply(e)).collect::<Result<_, _>>()?;
        Ok(Dense { ring: h.target().clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Entrywise section lift; zeros lift to zeros.
    pub fn map_section(&self, h: &RingHom) -> Result<Dense, RingError> {
        let data = self.data.iter().map(|e| h.section(e)).collect::<Result<_, _>>()?;
        Ok(Dense { ring: h.source().clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Dense {
        let mut out = Dense::zeros(&self.ring, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    /// Copies `block` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Dense) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// `n x n` matrix equal to `self` on the top-left corner and the identity elsewhere.
    pub fn padded(&self, n: usize) -> Dense {
        let mut out = Dense::identity(&self.ring, n.max(self.rows));
        out.put(0, 0, self);
        out
    }

    /// Characteristic polynomial coefficients of `det(tI - A)`, leading first,
    /// by the division-free Berkowitz recurrence.
    pub fn charpoly(&self) -> Vec<RingElement> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let ring = &self.ring;
        let one = RingElement::one(ring);
        let mut p = vec![one.clone()];
        for r in 1..=self.rows {
            let a = self.get(r - 1, r - 1).clone();
            // t = [1, -a, -R C, -R M C, ..., -R M^{r-2} C]
            let mut t = vec![one.clone(), -a];
            let mut v: Vec<RingElement> = (0..r - 1).map(|i| self.get(i, r - 1).clone()).collect();
            for step in 0..r.saturating_sub(1) {
                let rc = (0..r - 1).fold(RingElement::zero(ring), |acc, k| {
                    &acc + &(self.get(r - 1, k) * &v[k])
                });
                t.push(-rc);
                if step + 1 < r - 1 {
                    v = (0..r - 1)
                        .map(|i| {
                            (0..r - 1).fold(RingElement::zero(ring), |acc, k| {
                                &acc + &(self.get(i, k) * &v[k])
                            })
                        })
                        .collect();
                }
            }
            let mut next = vec![RingElement::zero(ring); r + 1];
            for (i, out) in next.iter_mut().enumerate() {
                for (j, pj) in p.iter().enumerate() {
                    if i >= j && i - j < t.len() {
                        *out = &*out + &(&t[i - j] * pj);
                    }
                }
            }
            p = next;
        }
        p
    }

    pub fn det(&self) -> RingElement {
        let p = self.charpoly();
        let d = p[self.rows].clone();
        if self.rows % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// Adjugate from Cayley-Hamilton: `adj(A) = (-1)^(n-1) sum_k c_k A^(n-1-k)`.
    pub fn adjugate(&self) -> Dense {
        let n = self.rows;
        let c = self.charpoly();
        let mut acc = Dense::zeros(&self.ring, n, n);
        // Horner: ((A + c1) A + c2) A + ... + c_{n-1}
        for ck in c.iter().take(n) {
            acc = acc.mul(self).add(&Dense::identity(&self.ring, n).scale(ck));
        }
        if n.is_multiple_of(2) {
            acc.neg()
        } else {
            acc
        }
    }

    /// Exact inverse; fails unless the determinant is a unit.
    pub fn inverse(&self) -> Result<Dense, RingError> {
        if !self.is_square() {
            return Err(RingError::NotInvertible("non-square matrix".into()));
        }
        let d = self.det();
        let dinv = d.inverse().ok_or_else(|| RingError::NotInvertible(format!("det {d}")))?;
        Ok(self.adjugate().scale(&dinv))
    }

    pub fn transpose(&self) -> Dense {
        let mut out = Dense::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn render(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}
