use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{binomial, CohomologyError, SystemSpec, TWIST_NOTE};
use crate::colfin::thread_pool;

/// Largest number of top-cohomology classes tracked for one summand.
const CLASS_CAP: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Condition {
    /// `E_k(d)` globally generated for all large `k`.
    G,
    /// The colimit of `E_k(d)` is globally generated.
    GPrime,
    /// `H^q(E_k(d)) = 0` for `q > l` and all large `k`.
    V(u32),
    /// The colimit of `H^q(E_k(d))` vanishes for `q > l`.
    VPrime(u32),
}

impl Condition {
    pub fn is_colimit(self) -> bool {
        matches!(self, Condition::GPrime | Condition::VPrime(_))
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::G => write!(f, "G"),
            Condition::GPrime => write!(f, "G'"),
            Condition::V(l) => write!(f, "V{l}"),
            Condition::VPrime(l) => write!(f, "V'{l}"),
        }
    }
}

impl FromStr for Condition {
    type Err = CohomologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CohomologyError::UnknownCondition(s.to_string());
        match s {
            "G" => Ok(Condition::G),
            "G'" => Ok(Condition::GPrime),
            _ => {
                if let Some(l) = s.strip_prefix("V'") {
                    l.parse().map(Condition::VPrime).map_err(|_| bad())
                } else if let Some(l) = s.strip_prefix('V') {
                    l.parse().map(Condition::V).map_err(|_| bad())
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl From<Condition> for String {
    fn from(c: Condition) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Condition {
    type Error = CohomologyError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelRow {
    pub level: usize,
    pub holds: bool,
    /// Colimit conditions: transitions needed until every class at this level
    /// is generated (G') or dead (V'); `None` when not reached.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Termwise: holds at every level from `level` through the horizon.
    Threshold { level: usize },
    /// Termwise: fails at the horizon.
    #[serde(rename = "none")]
    Never,
    /// Colimit: every tracked class resolves within `max_steps` transitions.
    Holds { max_steps: usize },
    /// Colimit: transitions are identities, so a bad class at `level` never resolves.
    Fails { level: usize },
    /// Colimit: a class at `level` is unresolved after the step budget.
    Inconclusive { level: usize },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Threshold { .. } | Verdict::Holds { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Threshold { level } => write!(f, "n' = {level}"),
            Verdict::Never => write!(f, "NONE"),
            Verdict::Holds { max_steps } => write!(f, "holds (<= {max_steps} steps)"),
            Verdict::Fails { level } => write!(f, "fails at level {level}"),
            Verdict::Inconclusive { level } => write!(f, "inconclusive at level {level}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistResult {
    pub twist: i64,
    pub verdict: Verdict,
    pub levels: Vec<LevelRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub system: String,
    pub condition: Condition,
    pub horizon: usize,
    pub note: String,
    pub twists: Vec<TwistResult>,
}

impl ConditionReport {
    pub fn twist(&self, d: i64) -> Option<&TwistResult> {
        self.twists.iter().find(|t| t.twist == d)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system {}  condition {}  horizon {}", self.system, self.condition, self.horizon)?;
        writeln!(f, "{:>6}  {:<30}  levels 0..={}", "twist", "verdict", self.horizon)?;
        for t in &self.twists {
            let marks: String = t
                .levels
                .iter()
                .map(|r| if r.holds { '+' } else if r.steps.is_none() && self.condition.is_colimit() { '?' } else { '-' })
                .collect();
            writeln!(f, "{:>6}  {:<30}  {marks}", t.twist, t.verdict.to_string())?;
        }
        write!(f, "note: {}", self.note)
    }
}

/// Evaluates `cond` for `system (x) O(d)` at levels `0..=horizon`.
///
/// Colimit conditions follow each summand (G') or each top-cohomology monomial
/// class (V') through the transitions for at most `horizon` further steps.
pub fn check_condition(
    system: &SystemSpec,
    cond: Condition,
    twists: &[i64],
    horizon: usize,
) -> Result<ConditionReport, CohomologyError> {
    if horizon == 0 {
        return Err(CohomologyError::Invalid("horizon must be at least 1".into()));
    }
    let twists = thread_pool().install(|| {
        twists
            .par_iter()
            .map(|&d| evaluate(&system.twisted(d), cond, horizon).map(|(verdict, levels)| TwistResult { twist: d, verdict, levels }))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(ConditionReport { system: system.to_string(), condition: cond, horizon, note: TWIST_NOTE.into(), twists })
}

fn evaluate(sys: &SystemSpec, cond: Condition, horizon: usize) -> Result<(Verdict, Vec<LevelRow>), CohomologyError> {
    let n = sys.n;
    let mut levels = Vec::with_capacity(horizon + 1);
    match cond {
        Condition::G | Condition::V(_) => {
            for k in 0..=horizon {
                let term = sys.term(k);
                let holds = match cond {
                    Condition::G => term.globally_generated(),
                    Condition::V(l) => (l + 1..=n).all(|q| term.h(q).is_zero()),
                    _ => unreachable!(),
                };
                levels.push(LevelRow { level: k, holds, steps: None });
            }
            let bad = levels.iter().rposition(|r| !r.holds);
            let verdict = match bad {
                None => Verdict::Threshold { level: 0 },
                Some(k) if k < horizon => Verdict::Threshold { level: k + 1 },
                Some(_) => Verdict::Never,
            };
            Ok((verdict, levels))
        }
        Condition::GPrime | Condition::VPrime(_) => {
            let mut stuck = None;
            for k in 0..=horizon {
                let term = sys.term(k);
                let mut worst = Some(0usize);
                for (e, _) in &term.summands {
                    let steps = match cond {
                        Condition::GPrime => generation_steps(*e, sys.degree_step(), horizon),
                        Condition::VPrime(l) if l < n => top_class_steps(n, *e, sys.sections(), horizon)?,
                        _ => Some(0),
                    };
                    worst = match (worst, steps) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        _ => None,
                    };
                }
                if worst.is_none() && stuck.is_none() {
                    stuck = Some(k);
                }
                levels.push(LevelRow { level: k, holds: worst.is_some(), steps: worst });
            }
            let verdict = match stuck {
                None => Verdict::Holds { max_steps: levels.iter().filter_map(|r| r.steps).max().unwrap_or(0) },
                Some(level) if sys.sections() == 0 => Verdict::Fails { level },
                Some(level) => Verdict::Inconclusive { level },
            };
            Ok((verdict, levels))
        }
    }
}

/// Transitions until a summand of degree `e` lands in globally generated summands.
fn generation_steps(e: i64, step: i64, budget: usize) -> Option<usize> {
    (0..=budget).find(|&j| e + step * j as i64 >= 0)
}

/// Transitions until every class of `H^n(P^n, O(e))` maps to zero, multiplying
/// by each of the `sections` coordinates per step (`0`: identity transitions).
fn top_class_steps(n: u32, e: i64, sections: u32, budget: usize) -> Result<Option<usize>, CohomologyError> {
    if e > -i64::from(n) - 1 {
        return Ok(Some(0));
    }
    let count = binomial((-e - 1) as u64, u64::from(n));
    if count > BigUint::from(CLASS_CAP) {
        return Err(CohomologyError::UnsupportedTwist(e, format!("{count} top-cohomology classes exceed the tracking cap")));
    }
    if sections == 0 {
        return Ok(None);
    }
    let mut worst = 0;
    for class in negative_monomials(n as usize + 1, e) {
        match class_death(&class, budget) {
            Some(j) => worst = worst.max(j),
            None => return Ok(None),
        }
    }
    Ok(Some(worst))
}

/// Exponent vectors with every entry `<= -1` and sum `e`.
pub(crate) fn negative_monomials(vars: usize, e: i64) -> Vec<Vec<i64>> {
    fn go(vars: usize, rest: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if vars == 1 {
            if rest <= -1 {
                cur.push(rest);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let min_rest = -(vars as i64 - 1);
        let mut a = -1;
        while rest - a <= min_rest {
            cur.push(a);
            go(vars - 1, rest - a, cur, out);
            cur.pop();
            a -= 1;
        }
    }
    let mut out = Vec::new();
    go(vars, e, &mut Vec::new(), &mut out);
    out
}

/// Least `j` such that every degree-`j` monomial multiple of the Cech class
/// `x^a` is a coboundary (some exponent becomes nonnegative).
pub(crate) fn class_death(a: &[i64], budget: usize) -> Option<usize> {
    let mut frontier: BTreeSet<Vec<i64>> = BTreeSet::from([a.to_vec()]);
    for j in 1..=budget {
        let mut next = BTreeSet::new();
        for m in &frontier {
            for i in 0..m.len() {
                if m[i] < -1 {
                    let mut b = m.clone();
                    b[i] += 1;
                    next.insert(b);
                }
            }
        }
        if next.is_empty() {
            return Some(j);
        }
        frontier = next;
    }
    None
}
