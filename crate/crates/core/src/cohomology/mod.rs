//! Cohomology of sums of line bundles on projective space, termwise and
//! colimit positivity conditions for systems of such sums, and the
//! counterexample reports built on them.
//!
//! Twists are restricted to line bundles `O(d)`; reports state this.

mod conditions;
mod reports;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use conditions::{check_condition, Condition, ConditionReport, LevelRow, TwistResult, Verdict};
pub use reports::{
    nonfree_pullback_report, pullback_decompose, pullback_transition, punctured_plane_report, quotient_report, ClassDeath, NonfreeReport, PuncturedLevel,
    PuncturedPlaneReport, QuotientLevel, QuotientReport, StageCheck,
};

pub const TWIST_NOTE: &str =
    "twists restricted to line bundles O(d); general coherent twists are not checked";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("unsupported twist {0}: {1}")]
    UnsupportedTwist(i64, String),
    #[error("unknown system `{0}` (expected standard:Pn, shifted_sum:Pn or constant:Pn:d)")]
    UnknownSystem(String),
    #[error("unknown condition `{0}` (expected G, G', V<l> or V'<l>)")]
    UnknownCondition(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Serializes a dimension as a decimal string.
pub(crate) fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn decimal_summands<S: serde::Serializer>(v: &[(i64, BigUint)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(d, m)| (d, m.to_string())))
}

/// `dim H^q(P^n, O(d))`.
pub fn coh_dim(n: u32, d: i64, q: u32) -> BigUint {
    assert!(n >= 1, "projective space of dimension 0");
    let n64 = i64::from(n);
    if q == 0 {
        if d >= 0 {
            binomial((n64 + d) as u64, u64::from(n))
        } else {
            BigUint::zero()
        }
    } else if q == n {
        if d < -n64 {
            binomial((-d - 1) as u64, u64::from(n))
        } else {
            BigUint::zero()
        }
    } else {
        BigUint::zero()
    }
}

/// `O(d_1)^{m_1} + ... + O(d_r)^{m_r}` on `P^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineBundleSum {
    pub n: u32,
    /// `(degree, multiplicity)`, multiplicities at least 1.
    #[serde(serialize_with = "decimal_summands")]
    pub summands: Vec<(i64, BigUint)>,
}

impl LineBundleSum {
    pub fn rank(&self) -> BigUint {
        self.summands.iter().map(|(_, m)| m.clone()).sum()
    }

    pub fn twisted(&self, d: i64) -> LineBundleSum {
        LineBundleSum { n: self.n, summands: self.summands.iter().map(|(e, m)| (e + d, m.clone())).collect() }
    }

    pub fn h(&self, q: u32) -> BigUint {
        self.summands.iter().map(|(e, m)| coh_dim(self.n, *e, q) * m).sum()
    }

    pub fn globally_generated(&self) -> bool {
        self.summands.iter().all(|(e, _)| *e >= 0)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.summands.iter().map(|(e, _)| *e).min()
    }
}

impl fmt::Display for LineBundleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(e, m)| if m.is_one() { format!("O({e})") } else { format!("O({e})^{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionKind {
    /// `E_k = O(k)^{(n+1)^k}`, transition `phi (x) id` with `phi = (x_0, ..., x_n)`.
    Standard,
    /// `E_k = sum_{i <= k} O(i-1)^{(n+1)^i}`: shifted copies of the standard system twisted by `O(-1)`.
    ShiftedSum,
    /// `E_k = O(d)`, identity transitions.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub n: u32,
    pub kind: TransitionKind,
    /// Global twist for standard/shifted systems; the degree for constant ones.
    pub degree: i64,
}

impl SystemSpec {
    pub fn standard(n: u32) -> Self {
        SystemSpec { n, kind: TransitionKind::Standard, degree: 0 }
    }

    pub fn shifted_sum(n: u32) -> Self {
        SystemSpec { n, kind: TransitionKind::ShiftedSum, degree: 0 }
    }

    pub fn constant(n: u32, degree: i64) -> Self {
        SystemSpec { n, kind: TransitionKind::Constant, degree }
    }

    pub fn twisted(&self, d: i64) -> Self {
        SystemSpec { degree: self.degree + d, ..self.clone() }
    }

    /// Number of sections of `O(1)` used by the transition (`0` for identity maps).
    pub fn sections(&self) -> u32 {
        match self.kind {
            TransitionKind::Constant => 0,
            _ => self.n + 1,
        }
    }

    /// Degree shift of a summand under one transition.
    pub fn degree_step(&self) -> i64 {
        match self.kind {
            TransitionKind::Constant => 0,
            _ => 1,
        }
    }

    pub fn term(&self, k: usize) -> LineBundleSum {
        let m = BigUint::from(self.n + 1);
        let summands = match self.kind {
            TransitionKind::Standard => vec![(k as i64 + self.degree, m.pow(k))],
            TransitionKind::ShiftedSum => {
                (0..=k).map(|i| (i as i64 - 1 + self.degree, m.clone().pow(i))).collect()
            }
            TransitionKind::Constant => vec![(self.degree, BigUint::one())],
        };
        LineBundleSum { n: self.n, summands }
    }

    pub fn ranks_strictly_increase(&self, horizon: usize) -> bool {
        (0..horizon).all(|k| self.term(k).rank() < self.term(k + 1).rank())
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TransitionKind::Standard => write!(f, "standard:P{}", self.n)?,
            TransitionKind::ShiftedSum => write!(f, "shifted_sum:P{}", self.n)?,
            TransitionKind::Constant => return write!(f, "constant:P{}:{}", self.n, self.degree),
        }
        if self.degree != 0 {
            write!(f, "({})", self.degree)?;
        }
        Ok(())
    }
}

impl FromStr for SystemSpec {
    type Err = CohomologyError;

    /// `standard:P2`, `shifted_sum:P1`, `constant:P2:-3`; an optional `(d)`
    /// suffix twists standard and shifted systems.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CohomologyError::UnknownSystem(s.to_string());
        let mut parts = s.split(':');
        let kind = parts.next().ok_or_else(bad)?;
        let space = parts.next().ok_or_else(bad)?;
        let (space, twist) = match space.split_once('(') {
            Some((sp, rest)) => (sp, rest.strip_suffix(')').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?),
            None => (space, 0),
        };
        let n: u32 = space.strip_prefix('P').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        let spec = match kind {
            "standard" => SystemSpec::standard(n).twisted(twist),
            "shifted_sum" => SystemSpec::shifted_sum(n).twisted(twist),
            "constant" => {
                let d: i64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                SystemSpec::constant(n, d)
            }
            _ => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn coh_dim_examples() {
        assert_eq!(coh_dim(1, 0, 0), u(1));
        assert_eq!(coh_dim(2, -3, 2), u(1));
        assert_eq!(coh_dim(1, 3, 0), u(4));
        assert_eq!(coh_dim(2, -2, 2), u(0));
        assert_eq!(coh_dim(3, 1, 1), u(0));
    }

    #[test]
    fn standard_terms() {
        let s = SystemSpec::standard(1);
        let shown: Vec<String> = (0..4).map(|k| s.term(k).to_string()).collect();
        assert_eq!(shown, ["O(0)", "O(1)^2", "O(2)^4", "O(3)^8"]);
        assert_eq!(SystemSpec::standard(2).term(2).to_string(), "O(2)^9");
        assert!(SystemSpec::standard(3).ranks_strictly_increase(12));
        assert!(!SystemSpec::constant(2, -3).ranks_strictly_increase(3));
    }

    #[test]
    fn shifted_sum_terms() {
        let s = SystemSpec::shifted_sum(1);
        assert_eq!(s.term(2).to_string(), "O(-1) + O(0)^2 + O(1)^4");
        assert!(s.ranks_strictly_increase(10));
    }

    #[test]
    fn parse_systems() {
        assert_eq!("standard:P2".parse::<SystemSpec>().unwrap(), SystemSpec::standard(2));
        assert_eq!("standard:P2(-3)".parse::<SystemSpec>().unwrap(), SystemSpec::standard(2).twisted(-3));
        assert_eq!("constant:P2:-3".parse::<SystemSpec>().unwrap(), SystemSpec::constant(2, -3));
        for s in ["standard:P0", "weird:P1", "standard", "constant:P1", "standard:P1:3"] {
            assert!(s.parse::<SystemSpec>().is_err(), "{s}");
        }
        for s in [SystemSpec::standard(2).twisted(-3), SystemSpec::shifted_sum(1), SystemSpec::constant(3, 4)] {
            assert_eq!(s.to_string().parse::<SystemSpec>().unwrap(), s);
        }
    }
}
