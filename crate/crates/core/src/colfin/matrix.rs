use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;

use super::{thread_pool, BlockPairing, ColFinError, Dense, IndexBijection, IndexSet, Side};
use crate::ring::{Ring, RingElement, RingHom};

/// Finite-support column: row index -> nonzero entry.
pub type SparseCol = BTreeMap<usize, RingElement>;

/// `Id + M` with `M` supported in rows outside `J` and columns inside `J`.
#[derive(Debug, Clone, PartialEq)]
pub enum ElementaryForm {
    /// Columns listed explicitly; a column of `J` without an entry is `e_j`.
    Finite { j: IndexSet, cols: BTreeMap<usize, SparseCol> },
    /// `J` is one side of a block pairing. The column at position `r` of a
    /// `J`-block adds `block[i][r]` at position `i` of the partner block.
    Paired { pairing: BlockPairing, side: Side, block: Dense },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Form {
    Identity,
    /// `diag(corner, Id)`.
    FinitePerturbation { corner: Dense },
    Elementary(ElementaryForm),
    /// Column `j` is `e_{sigma(j)}`.
    Permutation(IndexBijection),
    /// `-1` on the given indices, `1` elsewhere.
    SignFlip(IndexSet),
    ScalarDiagonal { prefix: Vec<RingElement>, tail: RingElement },
    /// Dense blocks along the diagonal, then `tail` repeated (or the identity).
    BlockDiagonal { prefix: Vec<Dense>, tail: Option<Dense> },
    /// Evaluated as the ordinary matrix product, leftmost factor outermost.
    Product(Vec<ColFinMatrix>),
}

/// A column-finite `N x N` matrix over a ring, described structurally.
#[derive(Debug, Clone, PartialEq)]
pub struct ColFinMatrix {
    ring: Ring,
    form: Form,
}

/// A matrix together with a two-sided inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertibleColFin {
    pub matrix: ColFinMatrix,
    pub inverse: ColFinMatrix,
}

fn check_ring(expected: &Ring, e: &RingElement) -> Result<(), ColFinError> {
    if e.ring() != expected {
        return Err(ColFinError::Mismatch(e.ring().to_string(), expected.to_string()));
    }
    Ok(())
}

fn check_dense(expected: &Ring, d: &Dense) -> Result<(), ColFinError> {
    if d.ring() != expected {
        return Err(ColFinError::Mismatch(d.ring().to_string(), expected.to_string()));
    }
    if !d.is_square() {
        return Err(ColFinError::Invalid("block must be square".into()));
    }
    Ok(())
}

fn add_into(col: &mut SparseCol, row: usize, v: RingElement) {
    if v.is_zero() {
        return;
    }
    match col.remove(&row) {
        Some(old) => {
            let s = &old + &v;
            if !s.is_zero() {
                col.insert(row, s);
            }
        }
        None => {
            col.insert(row, v);
        }
    }
}

impl ColFinMatrix {
    pub fn identity(ring: &Ring) -> Self {
        ColFinMatrix { ring: ring.clone(), form: Form::Identity }
    }

    pub fn finite_perturbation(corner: Dense) -> Result<Self, ColFinError> {
        let ring = corner.ring().clone();
        check_dense(&ring, &corner)?;
        Ok(ColFinMatrix { ring, form: Form::FinitePerturbation { corner } })
    }

    pub fn elementary(
        ring: &Ring,
        j: IndexSet,
        cols: BTreeMap<usize, SparseCol>,
    ) -> Result<Self, ColFinError> {
        j.validate().map_err(ColFinError::Invalid)?;
        let mut clean = BTreeMap::new();
        for (c, col) in cols {
            if !j.contains(c) {
                return Err(ColFinError::Invalid(format!("column {c} is not in J")));
            }
            let mut kept = SparseCol::new();
            for (r, v) in col {
                check_ring(ring, &v)?;
                if j.contains(r) {
                    return Err(ColFinError::Invalid(format!(
                        "column {c} has an entry in row {r}, which lies in J"
                    )));
                }
                if !v.is_zero() {
                    kept.insert(r, v);
                }
            }
            if !kept.is_empty() {
                clean.insert(c, kept);
            }
        }
        Ok(ColFinMatrix {
            ring: ring.clone(),
            form: Form::Elementary(ElementaryForm::Finite { j, cols: clean }),
        })
    }

    /// Single-entry elementary matrix `Id + v e_{row,col}`, `row != col`.
    pub fn elementary_entry(
        ring: &Ring,
        row: usize,
        col: usize,
        v: RingElement,
    ) -> Result<Self, ColFinError> {
        if row == col {
            return Err(ColFinError::Invalid("elementary entry on the diagonal".into()));
        }
        let cols = BTreeMap::from([(col, SparseCol::from([(row, v)]))]);
        Self::elementary(ring, IndexSet::finite([col]), cols)
    }

    pub fn paired_elementary(
        pairing: BlockPairing,
        side: Side,
        block: Dense,
    ) -> Result<Self, ColFinError> {
        let ring = block.ring().clone();
        check_dense(&ring, &block)?;
        super::index::validate_pairing(&pairing).map_err(ColFinError::Invalid)?;
        if block.rows() != pairing.block() {
            return Err(ColFinError::Invalid("block size differs from the pairing".into()));
        }
        Ok(ColFinMatrix {
            ring,
            form: Form::Elementary(ElementaryForm::Paired { pairing, side, block }),
        })
    }

    pub fn permutation(ring: &Ring, sigma: IndexBijection) -> Result<Self, ColFinError> {
        sigma.validate().map_err(ColFinError::Invalid)?;
        Ok(ColFinMatrix { ring: ring.clone(), form: Form::Permutation(sigma) })
    }

    pub fn sign_flip(ring: &Ring, set: IndexSet) -> Result<Self, ColFinError> {
        set.validate().map_err(ColFinError::Invalid)?;
        Ok(ColFinMatrix { ring: ring.clone(), form: Form::SignFlip(set) })
    }

    pub fn scalar_diagonal(
        ring: &Ring,
        prefix: Vec<RingElement>,
        tail: RingElement,
    ) -> Result<Self, ColFinError> {
        for e in prefix.iter().chain([&tail]) {
            check_ring(ring, e)?;
        }
        Ok(ColFinMatrix { ring: ring.clone(), form: Form::ScalarDiagonal { prefix, tail } })
    }

    pub fn block_diagonal(
        ring: &Ring,
        prefix: Vec<Dense>,
        tail: Option<Dense>,
    ) -> Result<Self, ColFinError> {
        for b in prefix.iter().chain(tail.as_ref()) {
            check_dense(ring, b)?;
            if b.rows() == 0 {
                return Err(ColFinError::Invalid("empty block".into()));
            }
        }
        Ok(ColFinMatrix { ring: ring.clone(), form: Form::BlockDiagonal { prefix, tail } })
    }

    /// Product of `factors`, flattening nested products and dropping identities.
    pub fn product(ring: &Ring, factors: Vec<ColFinMatrix>) -> Result<Self, ColFinError> {
        let mut flat = Vec::new();
        for f in factors {
            if &f.ring != ring {
                return Err(ColFinError::Mismatch(f.ring.to_string(), ring.to_string()));
            }
            match f.form {
                Form::Identity => {}
                Form::Product(inner) => flat.extend(inner),
                _ => flat.push(f),
            }
        }
        Ok(match flat.len() {
            0 => Self::identity(ring),
            1 => flat.pop().unwrap(),
            _ => ColFinMatrix { ring: ring.clone(), form: Form::Product(flat) },
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn factors(&self) -> Vec<&ColFinMatrix> {
        match &self.form {
            Form::Product(fs) => fs.iter().collect(),
            Form::Identity => Vec::new(),
            _ => vec![self],
        }
    }

    pub fn form_name(&self) -> &'static str {
        match &self.form {
            Form::Identity => "identity",
            Form::FinitePerturbation { .. } => "finite_perturbation",
            Form::Elementary(ElementaryForm::Finite { .. }) => "elementary",
            Form::Elementary(ElementaryForm::Paired { .. }) => "paired_elementary",
            Form::Permutation(_) => "permutation",
            Form::SignFlip(_) => "sign_flip",
            Form::ScalarDiagonal { .. } => "scalar_diagonal",
            Form::BlockDiagonal { .. } => "block_diagonal",
            Form::Product(_) => "product",
        }
    }

    /// Elementary, permutation and sign matrices lift along any surjection
    /// entry by entry.
    pub fn is_liftable_generator(&self) -> bool {
        matches!(
            self.form,
            Form::Identity | Form::Elementary(_) | Form::Permutation(_) | Form::SignFlip(_)
        )
    }

    fn one(&self) -> RingElement {
        RingElement::one(&self.ring)
    }

    /// Exact column `j`.
    pub fn column(&self, j: usize) -> SparseCol {
        let unit = |i: usize, v: RingElement| {
            let mut c = SparseCol::new();
            add_into(&mut c, i, v);
            c
        };
        match &self.form {
            Form::Identity => unit(j, self.one()),
            Form::FinitePerturbation { corner } => {
                if j < corner.rows() {
                    let mut c = SparseCol::new();
                    for i in 0..corner.rows() {
                        add_into(&mut c, i, corner.get(i, j).clone());
                    }
                    c
                } else {
                    unit(j, self.one())
                }
            }
            Form::Elementary(ElementaryForm::Finite { j: set, cols }) => {
                let mut c = unit(j, self.one());
                if set.contains(j) {
                    if let Some(extra) = cols.get(&j) {
                        for (r, v) in extra {
                            add_into(&mut c, *r, v.clone());
                        }
                    }
                }
                c
            }
            Form::Elementary(ElementaryForm::Paired { pairing, side, block }) => {
                let mut c = unit(j, self.one());
                if let Some((b, r)) = pairing.locate(j) {
                    if let Some((s, partner)) = pairing.role(b) {
                        if s == *side {
                            let start = pairing.block_start(partner);
                            for i in 0..block.rows() {
                                add_into(&mut c, start + i, block.get(i, r).clone());
                            }
                        }
                    }
                }
                c
            }
            Form::Permutation(sigma) => unit(sigma.apply(j), self.one()),
            Form::SignFlip(set) => {
                let v = if set.contains(j) { -self.one() } else { self.one() };
                unit(j, v)
            }
            Form::ScalarDiagonal { prefix, tail } => {
                unit(j, prefix.get(j).unwrap_or(tail).clone())
            }
            Form::BlockDiagonal { prefix, tail } => {
                let Some((start, block)) = self.locate_block(prefix, tail.as_ref(), j) else {
                    return unit(j, self.one());
                };
                let mut c = SparseCol::new();
                for i in 0..block.rows() {
                    add_into(&mut c, start + i, block.get(i, j - start).clone());
                }
                c
            }
            Form::Product(fs) => {
                let mut v = unit(j, self.one());
                for f in fs.iter().rev() {
                    v = f.apply(&v);
                }
                v
            }
        }
    }

    fn locate_block<'a>(
        &self,
        prefix: &'a [Dense],
        tail: Option<&'a Dense>,
        j: usize,
    ) -> Option<(usize, &'a Dense)> {
        let mut start = 0;
        for b in prefix {
            if j < start + b.rows() {
                return Some((start, b));
            }
            start += b.rows();
        }
        let t = tail?;
        Some((start + (j - start) / t.rows() * t.rows(), t))
    }

    /// `self * v` for a finite-support vector.
    pub fn apply(&self, v: &SparseCol) -> SparseCol {
        if let Form::Product(fs) = &self.form {
            let mut w = v.clone();
            for f in fs.iter().rev() {
                w = f.apply(&w);
            }
            return w;
        }
        let mut out = SparseCol::new();
        for (k, x) in v {
            for (r, y) in self.column(*k) {
                add_into(&mut out, r, &y * x);
            }
        }
        out
    }

    pub fn entry(&self, i: usize, j: usize) -> RingElement {
        self.column(j).remove(&i).unwrap_or_else(|| RingElement::zero(&self.ring))
    }

    /// Top-left `n x n` corner, computed column by column.
    pub fn window(&self, n: usize) -> Dense {
        let cols: Vec<SparseCol> =
            thread_pool().install(|| (0..n).into_par_iter().map(|j| self.column(j)).collect());
        let mut d = Dense::zeros(&self.ring, n, n);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.range(..n) {
                d.set(*i, j, v.clone());
            }
        }
        d
    }

    /// Rows and columns `start..start+len`.
    pub fn diagonal_block(&self, start: usize, len: usize) -> Dense {
        let mut d = Dense::zeros(&self.ring, len, len);
        for j in 0..len {
            for (i, v) in self.column(start + j).range(start..start + len) {
                d.set(i - start, j, v.clone());
            }
        }
        d
    }

    /// Upper bound on the row indices of column `j`'s support.
    pub fn support_bound(&self, j: usize) -> usize {
        match &self.form {
            Form::Identity | Form::SignFlip(_) | Form::ScalarDiagonal { .. } => j,
            Form::FinitePerturbation { corner } => {
                if j < corner.rows() {
                    corner.rows() - 1
                } else {
                    j
                }
            }
            Form::Elementary(ElementaryForm::Finite { cols, .. }) => cols
                .get(&j)
                .and_then(|c| c.keys().next_back().copied())
                .map_or(j, |m| m.max(j)),
            Form::Elementary(ElementaryForm::Paired { pairing, side, block }) => pairing
                .locate(j)
                .and_then(|(b, _)| pairing.role(b))
                .filter(|(s, _)| s == side)
                .map_or(j, |(_, p)| j.max(pairing.block_start(p) + block.rows() - 1)),
            Form::Permutation(sigma) => sigma.apply(j),
            Form::BlockDiagonal { prefix, tail } => self
                .locate_block(prefix, tail.as_ref(), j)
                .map_or(j, |(start, b)| start + b.rows() - 1),
            Form::Product(fs) => {
                let mut b = j;
                for f in fs.iter().rev() {
                    b = (0..=b).map(|k| f.support_bound(k)).max().unwrap_or(b);
                }
                b
            }
        }
    }

    /// `(offset, period)` such that the matrix is block diagonal from
    /// `offset` on with period `period`, or `None` if no such profile is known.
    pub fn eventual_profile(&self) -> Option<(usize, usize)> {
        match &self.form {
            Form::Identity => Some((0, 1)),
            Form::FinitePerturbation { corner } => Some((corner.rows(), 1)),
            Form::ScalarDiagonal { prefix, .. } => Some((prefix.len(), 1)),
            Form::BlockDiagonal { prefix, tail } => Some((
                prefix.iter().map(Dense::rows).sum(),
                tail.as_ref().map_or(1, Dense::rows),
            )),
            Form::SignFlip(set) => set.profile(),
            Form::Permutation(sigma) => sigma.profile(),
            Form::Elementary(ElementaryForm::Finite { j, cols }) => {
                let (o, p) = j.profile()?;
                if j.is_finite() {
                    let top = cols.values().filter_map(|c| c.keys().next_back()).max();
                    Some((o.max(top.map_or(0, |t| t + 1)), 1))
                } else if cols.is_empty() {
                    Some((o, p))
                } else {
                    None
                }
            }
            Form::Elementary(ElementaryForm::Paired { pairing, .. }) => match pairing {
                BlockPairing::Periodic { offset, block } => Some((*offset, 2 * block)),
                BlockPairing::Chain { .. } => None,
            },
            Form::Product(fs) => {
                let mut o = 0;
                let mut p = 1;
                for f in fs {
                    let (fo, fp) = f.eventual_profile()?;
                    o = o.max(fo);
                    p = p.lcm(&fp);
                }
                // Blocks of different factors may straddle the largest offset.
                Some((o + p, p))
            }
        }
    }

    fn fusable(&self) -> bool {
        matches!(
            self.form,
            Form::Identity
                | Form::FinitePerturbation { .. }
                | Form::ScalarDiagonal { .. }
                | Form::BlockDiagonal { .. }
        )
    }

    /// Product `self * other`, fused into one structured form when both are
    /// eventually periodic diagonal-type matrices with aligned periods.
    pub fn multiply(&self, other: &ColFinMatrix) -> Result<ColFinMatrix, ColFinError> {
        if self.ring != other.ring {
            return Err(ColFinError::Mismatch(self.ring.to_string(), other.ring.to_string()));
        }
        match (&self.form, &other.form) {
            (Form::Identity, _) => return Ok(other.clone()),
            (_, Form::Identity) => return Ok(self.clone()),
            (
                Form::ScalarDiagonal { prefix: pa, tail: ta },
                Form::ScalarDiagonal { prefix: pb, tail: tb },
            ) => {
                let n = pa.len().max(pb.len());
                let prefix = (0..n)
                    .map(|i| pa.get(i).unwrap_or(ta) * pb.get(i).unwrap_or(tb))
                    .collect();
                return Ok(ColFinMatrix {
                    ring: self.ring.clone(),
                    form: Form::ScalarDiagonal { prefix, tail: ta * tb },
                }
                .normalized());
            }
            (Form::FinitePerturbation { corner: a }, Form::FinitePerturbation { corner: b }) => {
                let n = a.rows().max(b.rows());
                let corner = a.padded(n).mul(&b.padded(n));
                return Ok(ColFinMatrix {
                    ring: self.ring.clone(),
                    form: Form::FinitePerturbation { corner },
                }
                .normalized());
            }
            _ => {}
        }
        if self.fusable() && other.fusable() {
            let (oa, pa) = self.eventual_profile().expect("fusable forms have profiles");
            let (ob, pb) = other.eventual_profile().expect("fusable forms have profiles");
            let l = pa.lcm(&pb);
            let lo = oa.max(ob);
            let aligned = (lo..lo + l).find(|o| (o - oa) % pa == 0 && (o - ob) % pb == 0);
            if let Some(o) = aligned {
                let corner = self.window(o).mul(&other.window(o));
                let tail = self.diagonal_block(o, l).mul(&other.diagonal_block(o, l));
                let prefix = if o > 0 { vec![corner] } else { Vec::new() };
                return Ok(ColFinMatrix {
                    ring: self.ring.clone(),
                    form: Form::BlockDiagonal { prefix, tail: Some(tail) },
                }
                .normalized());
            }
        }
        Self::product(&self.ring, vec![self.clone(), other.clone()])
    }

    /// Collapses forms that are visibly the identity.
    pub fn normalized(self) -> ColFinMatrix {
        let is_id = match &self.form {
            Form::ScalarDiagonal { prefix, tail } => {
                tail.is_one() && prefix.iter().all(RingElement::is_one)
            }
            Form::FinitePerturbation { corner } => corner.is_identity(),
            Form::BlockDiagonal { prefix, tail } => {
                prefix.iter().all(Dense::is_identity) && tail.as_ref().is_none_or(Dense::is_identity)
            }
            Form::Elementary(ElementaryForm::Finite { cols, .. }) => cols.is_empty(),
            Form::Permutation(sigma) => sigma.is_identity(),
            Form::SignFlip(set) => set == &IndexSet::Finite(Default::default()),
            Form::Product(fs) => fs.is_empty(),
            _ => false,
        };
        if is_id {
            ColFinMatrix::identity(&self.ring)
        } else {
            self
        }
    }

    /// Inverse for the invertible-by-construction classes.
    pub fn invert(&self) -> Result<InvertibleColFin, ColFinError> {
        let ring = &self.ring;
        let inverse = match &self.form {
            Form::Identity => self.clone(),
            Form::Elementary(ElementaryForm::Finite { j, cols }) => {
                let neg = cols
                    .iter()
                    .map(|(c, col)| (*c, col.iter().map(|(r, v)| (*r, -v.clone())).collect()))
                    .collect();
                ColFinMatrix {
                    ring: ring.clone(),
                    form: Form::Elementary(ElementaryForm::Finite { j: j.clone(), cols: neg }),
                }
            }
            Form::Elementary(ElementaryForm::Paired { pairing, side, block }) => ColFinMatrix {
                ring: ring.clone(),
                form: Form::Elementary(ElementaryForm::Paired {
                    pairing: pairing.clone(),
                    side: *side,
                    block: block.neg(),
                }),
            },
            Form::Permutation(sigma) => {
                ColFinMatrix { ring: ring.clone(), form: Form::Permutation(sigma.inverse()) }
            }
            Form::SignFlip(_) => self.clone(),
            Form::ScalarDiagonal { prefix, tail } => {
                let inv = |i: usize, e: &RingElement| {
                    e.inverse().ok_or_else(|| ColFinError::NotInvertible {
                        block: i,
                        reason: format!("entry {e} is not a unit"),
                    })
                };
                let p = prefix.iter().enumerate().map(|(i, e)| inv(i, e)).collect::<Result<_, _>>()?;
                let t = inv(prefix.len(), tail)?;
                ColFinMatrix { ring: ring.clone(), form: Form::ScalarDiagonal { prefix: p, tail: t } }
            }
            Form::FinitePerturbation { corner } => {
                let inv = corner
                    .inverse()
                    .map_err(|e| ColFinError::NotInvertible { block: 0, reason: e.to_string() })?;
                ColFinMatrix { ring: ring.clone(), form: Form::FinitePerturbation { corner: inv } }
            }
            Form::BlockDiagonal { prefix, tail } => {
                let inv = |i: usize, b: &Dense| {
                    b.inverse()
                        .map_err(|e| ColFinError::NotInvertible { block: i, reason: e.to_string() })
                };
                let p = prefix.iter().enumerate().map(|(i, b)| inv(i, b)).collect::<Result<_, _>>()?;
                let t = tail.as_ref().map(|b| inv(prefix.len(), b)).transpose()?;
                ColFinMatrix { ring: ring.clone(), form: Form::BlockDiagonal { prefix: p, tail: t } }
            }
            Form::Product(fs) => {
                let invs = fs
                    .iter()
                    .rev()
                    .map(|f| f.invert().map(|i| i.inverse))
                    .collect::<Result<Vec<_>, _>>()?;
                Self::product(ring, invs)?
            }
        };
        Ok(InvertibleColFin { matrix: self.clone(), inverse })
    }

    fn map_entries(
        &self,
        target: &Ring,
        f: &dyn Fn(&RingElement) -> Result<RingElement, crate::ring::RingError>,
        fd: &dyn Fn(&Dense) -> Result<Dense, crate::ring::RingError>,
    ) -> Result<ColFinMatrix, ColFinError> {
        let form = match &self.form {
            Form::Identity => Form::Identity,
            Form::Permutation(s) => Form::Permutation(s.clone()),
            Form::SignFlip(s) => Form::SignFlip(s.clone()),
            Form::FinitePerturbation { corner } => Form::FinitePerturbation { corner: fd(corner)? },
            Form::Elementary(ElementaryForm::Finite { j, cols }) => {
                let mut out = BTreeMap::new();
                for (c, col) in cols {
                    let mut mc = SparseCol::new();
                    for (r, v) in col {
                        add_into(&mut mc, *r, f(v)?);
                    }
                    if !mc.is_empty() {
                        out.insert(*c, mc);
                    }
                }
                Form::Elementary(ElementaryForm::Finite { j: j.clone(), cols: out })
            }
            Form::Elementary(ElementaryForm::Paired { pairing, side, block }) => {
                Form::Elementary(ElementaryForm::Paired {
                    pairing: pairing.clone(),
                    side: *side,
                    block: fd(block)?,
                })
            }
            Form::ScalarDiagonal { prefix, tail } => Form::ScalarDiagonal {
                prefix: prefix.iter().map(f).collect::<Result<_, _>>()?,
                tail: f(tail)?,
            },
            Form::BlockDiagonal { prefix, tail } => Form::BlockDiagonal {
                prefix: prefix.iter().map(fd).collect::<Result<_, _>>()?,
                tail: tail.as_ref().map(fd).transpose()?,
            },
            Form::Product(fs) => Form::Product(
                fs.iter()
                    .map(|m| m.map_entries(target, f, fd))
                    .collect::<Result<_, _>>()?,
            ),
        };
        Ok(ColFinMatrix { ring: target.clone(), form })
    }

    /// Entrywise image under `h`, keeping the structural form.
    pub fn map_hom(&self, h: &RingHom) -> Result<ColFinMatrix, ColFinError> {
        if &self.ring != h.source() {
            return Err(ColFinError::Mismatch(self.ring.to_string(), h.source().to_string()));
        }
        self.map_entries(h.target(), &|e| h.apply(e), &|d| d.map_hom(h))
    }

    /// Entrywise section lift into the source ring; zeros stay absent.
    pub fn map_section(&self, h: &RingHom) -> Result<ColFinMatrix, ColFinError> {
        if &self.ring != h.target() {
            return Err(ColFinError::Mismatch(self.ring.to_string(), h.target().to_string()));
        }
        self.map_entries(h.source(), &|e| h.section(e), &|d| d.map_section(h))
    }

    /// Exact equality for eventually periodic operands, decided on the window
    /// of size `max(offsets) + 2 lcm(periods)`.
    pub fn eq_eventually_periodic(&self, other: &ColFinMatrix) -> Result<bool, ColFinError> {
        if self.ring != other.ring {
            return Err(ColFinError::Mismatch(self.ring.to_string(), other.ring.to_string()));
        }
        let (oa, pa) = self.eventual_profile().ok_or(ColFinError::NotEventuallyPeriodic)?;
        let (ob, pb) = other.eventual_profile().ok_or(ColFinError::NotEventuallyPeriodic)?;
        let n = oa.max(ob) + 2 * pa.lcm(&pb);
        Ok(first_mismatch(self, other, n).is_none())
    }

    /// Equality of the top-left `n x n` corners.
    pub fn eq_on_window(&self, other: &ColFinMatrix, n: usize) -> bool {
        first_mismatch(self, other, n).is_none()
    }
}

/// First `(row, col)` in row-major order where the two windows differ.
pub fn first_mismatch(a: &ColFinMatrix, b: &ColFinMatrix, n: usize) -> Option<(usize, usize)> {
    let (wa, wb) = (a.window(n), b.window(n));
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| wa.get(i, j) != wb.get(i, j))
}
