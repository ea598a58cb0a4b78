use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

/// A partition of the indices from `offset` on into blocks of size `block`,
/// with some blocks matched in pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockPairing {
    /// Blocks `2c` and `2c + 1` form a pair.
    Periodic { offset: usize, block: usize },
    /// Write `b + 1 = 2^s (2c + 1)`. Blocks with the same `c` form a chain
    /// indexed by `s`; parity 0 pairs levels `(0,1), (2,3), ...`, parity 1
    /// pairs `(1,2), (3,4), ...` and leaves level 0 unpaired.
    Chain { offset: usize, block: usize, parity: u8 },
}

impl BlockPairing {
    pub fn offset(&self) -> usize {
        match self {
            BlockPairing::Periodic { offset, .. } | BlockPairing::Chain { offset, .. } => *offset,
        }
    }

    pub fn block(&self) -> usize {
        match self {
            BlockPairing::Periodic { block, .. } | BlockPairing::Chain { block, .. } => *block,
        }
    }

    /// Block number and position inside it, or `None` before the offset.
    pub fn locate(&self, i: usize) -> Option<(usize, usize)> {
        let (o, k) = (self.offset(), self.block());
        (i >= o).then(|| ((i - o) / k, (i - o) % k))
    }

    pub fn block_start(&self, b: usize) -> usize {
        self.offset() + b * self.block()
    }

    /// Side and partner block of block `b`, if it is paired.
    pub fn role(&self, b: usize) -> Option<(Side, usize)> {
        match self {
            BlockPairing::Periodic { .. } => Some(if b.is_multiple_of(2) {
                (Side::First, b + 1)
            } else {
                (Side::Second, b - 1)
            }),
            BlockPairing::Chain { parity, .. } => {
                let s = (b + 1).trailing_zeros();
                let odd = (b + 1) >> s;
                let at = |level: u32| (odd << level) - 1;
                let first = if *parity == 0 { s.is_multiple_of(2) } else { !s.is_multiple_of(2) };
                if *parity != 0 && s == 0 {
                    None
                } else if first {
                    Some((Side::First, at(s + 1)))
                } else {
                    Some((Side::Second, at(s - 1)))
                }
            }
        }
    }

    /// Whether this pairing repeats with a finite period (Chain does not).
    pub fn is_periodic(&self) -> bool {
        matches!(self, BlockPairing::Periodic { .. })
    }
}

/// A subset of the natural numbers with decidable membership.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSet {
    Finite(BTreeSet<usize>),
    /// Below `offset` membership follows `prefix`; from `offset` on it
    /// follows `residues` modulo `period`.
    EventuallyPeriodic {
        offset: usize,
        period: usize,
        residues: BTreeSet<usize>,
        #[serde(default)]
        prefix: BTreeSet<usize>,
    },
    /// All indices lying in blocks of the given side of a pairing.
    PairSide { pairing: BlockPairing, side: Side },
}

impl IndexSet {
    pub fn finite(items: impl IntoIterator<Item = usize>) -> Self {
        IndexSet::Finite(items.into_iter().collect())
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        IndexSet::Finite((lo..hi).collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        match self {
            IndexSet::Finite(s) => s.contains(&i),
            IndexSet::EventuallyPeriodic { offset, period, residues, prefix } => {
                if i < *offset {
                    prefix.contains(&i)
                } else {
                    residues.contains(&((i - offset) % period))
                }
            }
            IndexSet::PairSide { pairing, side } => pairing
                .locate(i)
                .and_then(|(b, _)| pairing.role(b))
                .is_some_and(|(s, _)| s == *side),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            IndexSet::Finite(_) => true,
            IndexSet::EventuallyPeriodic { residues, .. } => residues.is_empty(),
            IndexSet::PairSide { .. } => false,
        }
    }

    /// `(offset, period)` for periodic sets; `None` for chain-based sets.
    pub fn profile(&self) -> Option<(usize, usize)> {
        match self {
            IndexSet::Finite(s) => Some((s.iter().next_back().map_or(0, |m| m + 1), 1)),
            IndexSet::EventuallyPeriodic { offset, period, .. } => Some((*offset, *period)),
            IndexSet::PairSide { pairing, .. } => match pairing {
                BlockPairing::Periodic { offset, block } => Some((*offset, 2 * block)),
                BlockPairing::Chain { .. } => None,
            },
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            IndexSet::EventuallyPeriodic { offset, period, residues, prefix } => {
                if *period == 0 {
                    return Err("period must be positive".into());
                }
                if residues.iter().any(|r| r >= period) {
                    return Err("residue out of range".into());
                }
                if prefix.iter().any(|p| p >= offset) {
                    return Err("prefix entry beyond offset".into());
                }
                Ok(())
            }
            IndexSet::PairSide { pairing, .. } => validate_pairing(pairing),
            IndexSet::Finite(_) => Ok(()),
        }
    }
}

pub(crate) fn validate_pairing(p: &BlockPairing) -> Result<(), String> {
    if p.block() == 0 {
        return Err("block size must be positive".into());
    }
    if let BlockPairing::Chain { parity, .. } = p {
        if *parity > 1 {
            return Err("chain parity must be 0 or 1".into());
        }
    }
    Ok(())
}

/// A bijection of the natural numbers, with both directions available.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexBijection {
    /// Moves only indices below `forward.len()`.
    Finite { forward: Vec<usize>, inverse: Vec<usize> },
    /// From `offset` on, index `offset + q*period + r` goes to
    /// `offset + q*period + perm[r]`; identity below `offset`.
    BlockPeriodic { offset: usize, period: usize, perm: Vec<usize>, inverse: Vec<usize> },
    /// Swaps every paired block with its partner, keeping positions.
    PairSwap(BlockPairing),
}

fn invert_table(v: &[usize]) -> Option<Vec<usize>> {
    let mut inv = vec![usize::MAX; v.len()];
    for (i, &t) in v.iter().enumerate() {
        if t >= v.len() || inv[t] != usize::MAX {
            return None;
        }
        inv[t] = i;
    }
    Some(inv)
}

impl IndexBijection {
    /// Finite permutation from its forward table `i -> forward[i]`.
    pub fn finite(forward: Vec<usize>) -> Result<Self, String> {
        let inverse = invert_table(&forward).ok_or("not a permutation table")?;
        Ok(IndexBijection::Finite { forward, inverse })
    }

    pub fn transposition(a: usize, b: usize) -> Self {
        let n = a.max(b) + 1;
        let mut f: Vec<usize> = (0..n).collect();
        f.swap(a, b);
        Self::finite(f).expect("transposition")
    }

    /// Builds from explicit image pairs; unmentioned indices are fixed.
    pub fn from_map(map: &BTreeMap<usize, usize>) -> Result<Self, String> {
        let n = map.keys().chain(map.values()).max().map_or(0, |m| m + 1);
        let mut f: Vec<usize> = (0..n).collect();
        for (&k, &v) in map {
            f[k] = v;
        }
        Self::finite(f)
    }

    pub fn block_periodic(offset: usize, perm: Vec<usize>) -> Result<Self, String> {
        if perm.is_empty() {
            return Err("empty period".into());
        }
        let inverse = invert_table(&perm).ok_or("not a permutation table")?;
        Ok(IndexBijection::BlockPeriodic { offset, period: perm.len(), perm, inverse })
    }

    pub fn apply(&self, i: usize) -> usize {
        match self {
            IndexBijection::Finite { forward, .. } => forward.get(i).copied().unwrap_or(i),
            IndexBijection::BlockPeriodic { offset, period, perm, .. } => {
                periodic_map(*offset, *period, perm, i)
            }
            IndexBijection::PairSwap(p) => pair_swap(p, i),
        }
    }

    pub fn apply_inverse(&self, i: usize) -> usize {
        match self {
            IndexBijection::Finite { inverse, .. } => inverse.get(i).copied().unwrap_or(i),
            IndexBijection::BlockPeriodic { offset, period, inverse, .. } => {
                periodic_map(*offset, *period, inverse, i)
            }
            IndexBijection::PairSwap(p) => pair_swap(p, i),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            IndexBijection::Finite { forward, inverse } => {
                IndexBijection::Finite { forward: inverse.clone(), inverse: forward.clone() }
            }
            IndexBijection::BlockPeriodic { offset, period, perm, inverse } => {
                IndexBijection::BlockPeriodic {
                    offset: *offset,
                    period: *period,
                    perm: inverse.clone(),
                    inverse: perm.clone(),
                }
            }
            IndexBijection::PairSwap(p) => IndexBijection::PairSwap(p.clone()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            IndexBijection::Finite { forward, .. } => forward.iter().enumerate().all(|(i, &t)| i == t),
            IndexBijection::BlockPeriodic { perm, .. } => {
                perm.iter().enumerate().all(|(i, &t)| i == t)
            }
            IndexBijection::PairSwap(_) => false,
        }
    }

    /// `(offset, period)` when the bijection is eventually periodic.
    pub fn profile(&self) -> Option<(usize, usize)> {
        match self {
            IndexBijection::Finite { forward, .. } => Some((forward.len(), 1)),
            IndexBijection::BlockPeriodic { offset, period, .. } => Some((*offset, *period)),
            IndexBijection::PairSwap(p) => match p {
                BlockPairing::Periodic { offset, block } => Some((*offset, 2 * block)),
                BlockPairing::Chain { .. } => None,
            },
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            IndexBijection::Finite { forward, inverse } => {
                if invert_table(forward).as_ref() != Some(inverse) {
                    return Err("forward and inverse tables disagree".into());
                }
                Ok(())
            }
            IndexBijection::BlockPeriodic { period, perm, inverse, .. } => {
                if *period != perm.len() || invert_table(perm).as_ref() != Some(inverse) {
                    return Err("periodic tables disagree".into());
                }
                Ok(())
            }
            IndexBijection::PairSwap(p) => validate_pairing(p),
        }
    }
}

fn periodic_map(offset: usize, period: usize, table: &[usize], i: usize) -> usize {
    if i < offset {
        return i;
    }
    let (q, r) = ((i - offset) / period, (i - offset) % period);
    offset + q * period + table[r]
}

fn pair_swap(p: &BlockPairing, i: usize) -> usize {
    match p.locate(i).and_then(|(b, r)| p.role(b).map(|(_, partner)| (partner, r))) {
        Some((partner, r)) => p.block_start(partner) + r,
        None => i,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_roles_are_symmetric() {
        for parity in 0..2 {
            let p = BlockPairing::Chain { offset: 3, block: 2, parity };
            for b in 0..500 {
                if let Some((side, partner)) = p.role(b) {
                    let (side2, back) = p.role(partner).unwrap();
                    assert_eq!(back, b);
                    assert_ne!(side, side2);
                } else {
                    assert_eq!(parity, 1);
                    assert_eq!(b % 2, 0);
                }
            }
        }
    }

    #[test]
    fn chain_levels() {
        let p0 = BlockPairing::Chain { offset: 0, block: 1, parity: 0 };
        assert_eq!(p0.role(0), Some((Side::First, 1)));
        assert_eq!(p0.role(1), Some((Side::Second, 0)));
        assert_eq!(p0.role(3), Some((Side::First, 7)));
        let p1 = BlockPairing::Chain { offset: 0, block: 1, parity: 1 };
        assert_eq!(p1.role(0), None);
        assert_eq!(p1.role(1), Some((Side::First, 3)));
        assert_eq!(p1.role(3), Some((Side::Second, 1)));
    }

    #[test]
    fn bijections_invert() {
        let bs = vec![
            IndexBijection::transposition(0, 4),
            IndexBijection::block_periodic(2, vec![2, 0, 1]).unwrap(),
            IndexBijection::PairSwap(BlockPairing::Periodic { offset: 1, block: 3 }),
            IndexBijection::PairSwap(BlockPairing::Chain { offset: 0, block: 2, parity: 1 }),
        ];
        for b in &bs {
            b.validate().unwrap();
            for i in 0..200 {
                assert_eq!(b.apply_inverse(b.apply(i)), i);
                assert_eq!(b.inverse().apply(b.apply(i)), i);
            }
        }
        assert!(IndexBijection::finite(vec![0, 0]).is_err());
    }

    #[test]
    fn index_sets() {
        let s = IndexSet::EventuallyPeriodic {
            offset: 4,
            period: 3,
            residues: [1].into(),
            prefix: [0].into(),
        };
        let members: Vec<usize> = (0..14).filter(|&i| s.contains(i)).collect();
        assert_eq!(members, vec![0, 5, 8, 11]);
        let side = IndexSet::PairSide {
            pairing: BlockPairing::Periodic { offset: 0, block: 2 },
            side: Side::Second,
        };
        assert!(!side.contains(1) && side.contains(2) && side.contains(3) && !side.contains(4));
    }
}
