//! Random generators and independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use colift_core::colfin::{BlockPairing, ColFinMatrix, Dense, IndexBijection, IndexSet, Side};
use colift_core::ring::{CoeffRing, Monomial, Ring, RingDescriptor, RingElement};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn z() -> Ring {
    Arc::new(RingDescriptor::Integers)
}

pub fn zm(m: u64) -> Ring {
    Arc::new(RingDescriptor::residue(m).unwrap())
}

pub fn zxy() -> Ring {
    Arc::new(RingDescriptor::polynomial(&["x", "y"], CoeffRing::Integers).unwrap())
}

pub fn zu() -> Ring {
    Arc::new(RingDescriptor::laurent("u", CoeffRing::Integers).unwrap())
}

/// One ring of every descriptor kind, with and without a modulus.
pub fn sample_rings() -> Vec<Ring> {
    vec![
        z(),
        zm(5),
        zm(6),
        zm(101),
        zxy(),
        Arc::new(RingDescriptor::polynomial(&["x"], CoeffRing::Residue(7.into())).unwrap()),
        zu(),
        Arc::new(RingDescriptor::laurent("u", CoeffRing::Residue(5.into())).unwrap()),
    ]
}

pub fn element(rng: &mut ChaCha8Rng, ring: &Ring) -> RingElement {
    let vars = ring.variables().len();
    if vars == 0 {
        return RingElement::from_int(ring, rng.gen_range(-20i64..=20));
    }
    let lo = if ring.is_laurent() { -3 } else { 0 };
    let terms = rng.gen_range(0..=3);
    let mut acc = RingElement::zero(ring);
    for _ in 0..terms {
        let m = Monomial((0..vars).map(|_| rng.gen_range(lo..=3)).collect());
        acc = &acc + &RingElement::monomial(ring, m, BigInt::from(rng.gen_range(-5i64..=5)));
    }
    acc
}

/// Units that exist in every sample ring: `+-1`, residues prime to the
/// modulus, and `+-u^k` in Laurent rings.
pub fn unit(rng: &mut ChaCha8Rng, ring: &Ring) -> RingElement {
    loop {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let e = if ring.is_laurent() {
            RingElement::monomial(ring, Monomial(vec![rng.gen_range(-3..=3)]), BigInt::from(sign))
        } else if let Some(m) = ring.characteristic() {
            let m: i64 = m.try_into().unwrap();
            RingElement::from_int(ring, rng.gen_range(1..m))
        } else {
            RingElement::from_int(ring, sign)
        };
        if e.is_unit() {
            return e;
        }
    }
}

/// Random invertible `n x n` matrix: unit diagonal times random elementary
/// row operations.
pub fn invertible_dense(rng: &mut ChaCha8Rng, ring: &Ring, n: usize) -> Dense {
    let diag: Vec<RingElement> = (0..n).map(|_| unit(rng, ring)).collect();
    let mut m = Dense::diagonal(ring, &diag);
    for _ in 0..2 * n {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = element(rng, ring);
        let mut e = Dense::identity(ring, n);
        e.set(i, j, c);
        m = e.mul(&m);
    }
    m
}

/// Uniform random matrix over `Z/p` with nonzero determinant.
pub fn random_gl_mod_p(rng: &mut ChaCha8Rng, ring: &Ring, n: usize, p: i64) -> Dense {
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
        let m = Dense::from_ints(ring, &rows);
        if m.det().is_unit() {
            return m;
        }
    }
}

pub fn dense(rng: &mut ChaCha8Rng, ring: &Ring, n: usize) -> Dense {
    let rows = (0..n).map(|_| (0..n).map(|_| element(rng, ring)).collect()).collect();
    Dense::from_rows(ring, rows).unwrap()
}

pub fn pairing(rng: &mut ChaCha8Rng) -> BlockPairing {
    let offset = rng.gen_range(0..4);
    let block = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        BlockPairing::Periodic { offset, block }
    } else {
        BlockPairing::Chain { offset, block, parity: rng.gen_range(0..=1) }
    }
}

pub fn bijection(rng: &mut ChaCha8Rng) -> IndexBijection {
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(1..8);
            let mut f: Vec<usize> = (0..n).collect();
            f.shuffle(rng);
            IndexBijection::finite(f).unwrap()
        }
        1 => {
            let p = rng.gen_range(1..5);
            let mut perm: Vec<usize> = (0..p).collect();
            perm.shuffle(rng);
            IndexBijection::block_periodic(rng.gen_range(0..4), perm).unwrap()
        }
        _ => IndexBijection::PairSwap(pairing(rng)),
    }
}

pub fn index_set(rng: &mut ChaCha8Rng) -> IndexSet {
    match rng.gen_range(0..2) {
        0 => IndexSet::finite((0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..12))),
        _ => IndexSet::PairSide { pairing: pairing(rng), side: if rng.gen_bool(0.5) { Side::First } else { Side::Second } },
    }
}

/// Elementary matrix: finite `J` with columns supported outside `J`, or a paired form.
pub fn elementary(rng: &mut ChaCha8Rng, ring: &Ring) -> ColFinMatrix {
    if rng.gen_bool(0.5) {
        let j: BTreeSet<usize> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..10)).collect();
        let mut cols = BTreeMap::new();
        for &c in &j {
            let mut col = BTreeMap::new();
            for _ in 0..rng.gen_range(0..3) {
                let r = rng.gen_range(0..14);
                if !j.contains(&r) {
                    col.insert(r, element(rng, ring));
                }
            }
            cols.insert(c, col);
        }
        ColFinMatrix::elementary(ring, IndexSet::Finite(j), cols).unwrap()
    } else {
        let p = pairing(rng);
        let side = if rng.gen_bool(0.5) { Side::First } else { Side::Second };
        let block = dense(rng, ring, p.block());
        ColFinMatrix::paired_elementary(p, side, block).unwrap()
    }
}

/// Any structured form (not necessarily invertible), products nested once.
pub fn structured(rng: &mut ChaCha8Rng, ring: &Ring) -> ColFinMatrix {
    structured_depth(rng, ring, 1)
}

fn structured_depth(rng: &mut ChaCha8Rng, ring: &Ring, depth: usize) -> ColFinMatrix {
    let top = if depth == 0 { 7 } else { 8 };
    match rng.gen_range(0..top) {
        0 => ColFinMatrix::identity(ring),
        1 => {
            let n = rng.gen_range(1..5);
            ColFinMatrix::finite_perturbation(dense(rng, ring, n)).unwrap()
        }
        2 => elementary(rng, ring),
        3 => ColFinMatrix::permutation(ring, bijection(rng)).unwrap(),
        4 => ColFinMatrix::sign_flip(ring, index_set(rng)).unwrap(),
        5 => {
            let prefix = (0..rng.gen_range(0..4)).map(|_| element(rng, ring)).collect();
            ColFinMatrix::scalar_diagonal(ring, prefix, element(rng, ring)).unwrap()
        }
        6 => {
            let prefix = (0..rng.gen_range(0..3)).map(|_| {
                let k = rng.gen_range(1..4);
                dense(rng, ring, k)
            }).collect();
            let tail = if rng.gen_bool(0.6) {
                let k = rng.gen_range(1..4);
                Some(dense(rng, ring, k))
            } else {
                None
            };
            ColFinMatrix::block_diagonal(ring, prefix, tail).unwrap()
        }
        _ => {
            let fs = (0..rng.gen_range(2..4)).map(|_| structured_depth(rng, ring, depth - 1)).collect();
            ColFinMatrix::product(ring, fs).unwrap()
        }
    }
}

/// Invertible structured matrix, returned with its inverse by construction.
pub fn invertible_structured(rng: &mut ChaCha8Rng, ring: &Ring) -> ColFinMatrix {
    match rng.gen_range(0..6) {
        0 => elementary(rng, ring),
        1 => ColFinMatrix::permutation(ring, bijection(rng)).unwrap(),
        2 => ColFinMatrix::sign_flip(ring, index_set(rng)).unwrap(),
        3 => {
            let n = rng.gen_range(1..4);
            ColFinMatrix::finite_perturbation(invertible_dense(rng, ring, n)).unwrap()
        }
        4 => {
            let prefix = (0..rng.gen_range(0..3)).map(|_| unit(rng, ring)).collect();
            ColFinMatrix::scalar_diagonal(ring, prefix, unit(rng, ring)).unwrap()
        }
        _ => {
            let k = rng.gen_range(1..3);
            let tail = invertible_dense(rng, ring, k);
            let k0 = rng.gen_range(1..3);
            let prefix = vec![invertible_dense(rng, ring, k0)];
            ColFinMatrix::block_diagonal(ring, prefix, Some(tail)).unwrap()
        }
    }
}

/// Exact rank of an integer matrix over `Z/p`.
fn rank_mod_p(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c].rem_euclid(p) != 0) else { continue };
        m.swap(rank, piv);
        let inv = mod_pow(m[rank][c].rem_euclid(p), p - 2, p);
        for r in 0..rows {
            if r != rank {
                let f = m[r][c].rem_euclid(p) * inv % p;
                if f != 0 {
                    let pivot = m[rank].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot) {
                        *x = (*x - f * y).rem_euclid(p);
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_pow(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Cohomology dimensions of the Cech complex of the standard cover of `P^n`
/// in one multidegree whose negative coordinates are `neg`: the complex of
/// subsets `s` of `{0..n}` containing `neg`, with the alternating coface map.
fn cech_piece(n: usize, neg: &BTreeSet<usize>) -> Vec<usize> {
    let all: Vec<BTreeSet<usize>> = (0u32..(1 << (n + 1)))
        .map(|mask| (0..=n).filter(|i| mask & (1 << i) != 0).collect::<BTreeSet<usize>>())
        .filter(|s| !s.is_empty() && neg.is_subset(s))
        .collect();
    let by_size = |k: usize| all.iter().filter(|s| s.len() == k).cloned().collect::<Vec<_>>();
    let p = 1_000_003;
    let rank_of = |k: usize| -> usize {
        // d: C^{k-1} -> C^k, from subsets of size k to size k+1
        let src = by_size(k);
        let dst = by_size(k + 1);
        if src.is_empty() || dst.is_empty() {
            return 0;
        }
        let m: Vec<Vec<i64>> = dst
            .iter()
            .map(|t| {
                src.iter()
                    .map(|s| {
                        if !s.is_subset(t) {
                            return 0;
                        }
                        let extra = t.difference(s).next().copied().unwrap();
                        let pos = t.iter().filter(|&&i| i < extra).count();
                        if pos % 2 == 0 { 1 } else { -1 }
                    })
                    .collect()
            })
            .collect();
        rank_mod_p(m, p)
    };
    (0..=n)
        .map(|q| {
            let dim = by_size(q + 1).len();
            let out = rank_of(q + 1);
            let inc = if q == 0 { 0 } else { rank_of(q) };
            dim - out - inc
        })
        .collect()
}

/// `dim H^q(P^n, O(d))` by summing Cech cohomology over all Laurent
/// multidegrees of total degree `d`. Multidegrees are grouped by their set of
/// negative coordinates; groups other than "none" and "all" are infinite, so
/// the oracle requires their cohomology to vanish and counts the finite ones.
pub fn cech_oracle(n: usize, d: i64, q: usize) -> u128 {
    let mut total: u128 = 0;
    for mask in 0u32..(1 << (n + 1)) {
        let neg: BTreeSet<usize> = (0..=n).filter(|i| mask & (1 << i) != 0).collect();
        let h = cech_piece(n, &neg)[q] as u128;
        if neg.is_empty() {
            total += h * count_monomials(n + 1, d, 0) as u128;
        } else if neg.len() == n + 1 {
            total += h * count_monomials(n + 1, d, 1) as u128;
        } else {
            assert_eq!(h, 0, "infinite family with nonzero cohomology");
        }
    }
    total
}

/// Exponent vectors of length `vars` summing to `d`: all `>= 0` (`kind 0`)
/// or all `<= -1` (`kind 1`), by brute-force enumeration.
pub fn count_monomials(vars: usize, d: i64, kind: u8) -> u64 {
    fn go(vars: usize, rest: i64, kind: u8) -> u64 {
        if vars == 0 {
            return u64::from(rest == 0);
        }
        let range: Vec<i64> = if kind == 0 { (0..=rest.max(-1)).collect() } else { (rest.min(0)..=-1).collect() };
        range.into_iter().map(|a| go(vars - 1, rest - a, kind)).sum()
    }
    go(vars, d, kind)
}

/// `C(n+d, n)` extended polynomially to all `d`: `prod_{i=1..n} (d+i) / n!`.
pub fn hilbert_polynomial(n: i64, d: i64) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 1..=n {
        num *= i128::from(d + i);
        den *= i128::from(i);
    }
    num / den
}
