use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use super::conditions::class_death;
use super::{decimal, CohomologyError, SystemSpec};
use crate::ring::{CoeffRing, Monomial, Ring, RingDescriptor, RingElement};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PuncturedLevel {
    pub level: usize,
    /// Copies of `O` in `E_k = O^{2^k}`.
    #[serde(serialize_with = "decimal")]
    pub summands: BigUint,
    #[serde(serialize_with = "decimal")]
    pub dim_h1: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassDeath {
    /// The class `x^x_exp y^y_exp`, both exponents `<= -1`.
    pub x_exp: i64,
    pub y_exp: i64,
    /// Transitions after which every image component is a coboundary.
    pub death: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PuncturedPlaneReport {
    pub window: i64,
    pub horizon: usize,
    pub levels: Vec<PuncturedLevel>,
    pub classes: Vec<ClassDeath>,
    /// `H^1(E_k) != 0` at every level, so termwise vanishing fails.
    pub v0_fails: bool,
    /// Every window class dies within the horizon, so the colimit vanishes.
    pub v0_prime_holds: bool,
    pub death_bound: Option<usize>,
}

/// The standard system `O -> O^2 -> O^4 -> ...` (transition `(x, y)`) on
/// `A^2 - {0}`, with `H^1` computed on the cover `{x != 0}, {y != 0}`:
/// classes `x^a y^b` with `a, b <= -1` and total degree at least `-window`.
pub fn punctured_plane_report(window: i64, horizon: usize) -> Result<PuncturedPlaneReport, CohomologyError> {
    if window < 2 {
        return Err(CohomologyError::Invalid("window must be at least 2".into()));
    }
    let mut classes = Vec::new();
    for total in 2..=window {
        for a in 1..total {
            let b = total - a;
            classes.push(ClassDeath { x_exp: -a, y_exp: -b, death: class_death(&[-a, -b], horizon) });
        }
    }
    let per_copy = BigUint::from(classes.len());
    let levels: Vec<PuncturedLevel> = (0..=horizon)
        .map(|k| {
            let summands = BigUint::from(2u32).pow(k);
            PuncturedLevel { level: k, dim_h1: &summands * &per_copy, summands }
        })
        .collect();
    let v0_fails = levels.iter().all(|l| !l.dim_h1.is_zero());
    let v0_prime_holds = classes.iter().all(|c| c.death.is_some());
    let death_bound = if v0_prime_holds { classes.iter().filter_map(|c| c.death).max() } else { None };
    Ok(PuncturedPlaneReport { window, horizon, levels, classes, v0_fails, v0_prime_holds, death_bound })
}

impl fmt::Display for PuncturedPlaneReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "punctured plane, degree window [-{}, 0], horizon {}", self.window, self.horizon)?;
        for l in &self.levels {
            writeln!(f, "  level {:>2}: dim H^1 = {}", l.level, l.dim_h1)?;
        }
        for c in &self.classes {
            let d = c.death.map_or("not within horizon".to_string(), |d| format!("dies after {d} steps"));
            writeln!(f, "  class x^{} y^{}: {d}", c.x_exp, c.y_exp)?;
        }
        writeln!(f, "V0 fails: {}", self.v0_fails)?;
        write!(f, "V0' holds: {} (death bound {:?})", self.v0_prime_holds, self.death_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientLevel {
    pub level: usize,
    #[serde(serialize_with = "decimal")]
    pub h1_e: BigUint,
    #[serde(serialize_with = "decimal")]
    pub h2_e: BigUint,
    #[serde(serialize_with = "decimal")]
    pub h2_f: BigUint,
    /// `max(0, h2(F) - h2(E))`, a lower bound for `dim H^1(Q)`.
    #[serde(serialize_with = "decimal")]
    pub h1_q_lower_bound: BigUint,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub horizon: usize,
    pub levels: Vec<QuotientLevel>,
    /// Least level from which `dim H^1(Q_k) >= 1` is certified through the horizon.
    pub certified_from: Option<usize>,
}

/// On `P^2`: `E_k` = standard system twisted by `O(-3)`, `F_k = O(-3)`,
/// `Q_k = E_k / F_k`. The sequence `H^1(E) -> H^1(Q) -> H^2(F) -> H^2(E)`
/// bounds `dim H^1(Q_k)` below by `h2(F) - h2(E)`.
pub fn quotient_report(horizon: usize) -> Result<QuotientReport, CohomologyError> {
    if horizon < 4 {
        return Err(CohomologyError::Invalid("horizon must be at least 4".into()));
    }
    let e = SystemSpec::standard(2).twisted(-3);
    let f = SystemSpec::constant(2, -3);
    let levels: Vec<QuotientLevel> = (0..=horizon)
        .map(|k| {
            let (ek, fk) = (e.term(k), f.term(k));
            let (h1_e, h2_e, h2_f) = (ek.h(1), ek.h(2), fk.h(2));
            let h1_q_lower_bound = if h2_f > h2_e { &h2_f - &h2_e } else { BigUint::zero() };
            let certified = h1_e.is_zero() && h2_e.is_zero() && h1_q_lower_bound >= BigUint::one();
            QuotientLevel { level: k, h1_e, h2_e, h2_f, h1_q_lower_bound, certified }
        })
        .collect();
    let certified_from = match levels.iter().rposition(|l| !l.certified) {
        None => Some(0),
        Some(k) if k < horizon => Some(k + 1),
        Some(_) => None,
    };
    Ok(QuotientReport { horizon, levels, certified_from })
}

impl fmt::Display for QuotientReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "quotient on P^2: E = standard(-3), F = O(-3), horizon {}", self.horizon)?;
        writeln!(f, "  {:>5} {:>8} {:>8} {:>8} {:>10}", "level", "h1(E)", "h2(E)", "h2(F)", "h1(Q) >=")?;
        for l in &self.levels {
            writeln!(
                f,
                "  {:>5} {:>8} {:>8} {:>8} {:>10}{}",
                l.level,
                l.h1_e,
                l.h2_e,
                l.h2_f,
                l.h1_q_lower_bound,
                if l.certified { "  certified" } else { "" }
            )?;
        }
        match self.certified_from {
            Some(k) => write!(f, "dim H^1(Q_k) >= 1 certified for {k} <= k <= {}", self.horizon),
            None => write!(f, "not certified at the horizon"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageCheck {
    pub stage: usize,
    pub components: usize,
    pub generators: usize,
    pub all_decompose: bool,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonfreeReport {
    pub stages: usize,
    pub degree_bound: u32,
    pub checks: Vec<StageCheck>,
    pub zero_section_ok: bool,
    /// `<x, y> * Gamma = Gamma` on every checked generator.
    pub identity_certified: bool,
    pub conclusion: String,
}

fn zxy() -> Ring {
    Arc::new(RingDescriptor::polynomial(&["x", "y"], CoeffRing::Integers).expect("valid ring"))
}

/// Stage-`k` section to stage `k+1`: component `w` goes to `x*s_w` at `2w`
/// and `y*s_w` at `2w+1`.
pub fn pullback_transition(section: &[RingElement]) -> Vec<RingElement> {
    let ring = section[0].ring().clone();
    let x = RingElement::var(&ring, "x").expect("x");
    let y = RingElement::var(&ring, "y").expect("y");
    section.iter().flat_map(|s| [&x * s, &y * s]).collect()
}

/// Stage-`k+1` sections `(s, t)` with `transition(section) = x*s + y*t`.
pub fn pullback_decompose(section: &[RingElement]) -> (Vec<RingElement>, Vec<RingElement>) {
    let ring = section[0].ring().clone();
    let zero = RingElement::zero(&ring);
    let mut s = vec![zero.clone(); 2 * section.len()];
    let mut t = vec![zero; 2 * section.len()];
    for (w, c) in section.iter().enumerate() {
        s[2 * w] = c.clone();
        t[2 * w + 1] = c.clone();
    }
    (s, t)
}

fn decomposes(section: &[RingElement]) -> bool {
    let ring = section[0].ring().clone();
    let x = RingElement::var(&ring, "x").expect("x");
    let y = RingElement::var(&ring, "y").expect("y");
    let (s, t) = pullback_decompose(section);
    let combo: Vec<RingElement> = s.iter().zip(&t).map(|(a, b)| &(&x * a) + &(&y * b)).collect();
    combo == pullback_transition(section)
}

/// Sections of `O^{2^k}` on `A^2 - {0}` are `Z[x,y]^{2^k}`; checks that each
/// stage-`k` generator `x^i y^j e_w` (`i + j <= degree_bound`) becomes
/// `x*s + y*t` one stage later.
pub fn nonfree_pullback_report(stages: usize, degree_bound: u32) -> Result<NonfreeReport, CohomologyError> {
    if stages < 2 {
        return Err(CohomologyError::Invalid("at least 2 stages are required".into()));
    }
    let ring = zxy();
    let monomials: Vec<RingElement> = (0..=degree_bound)
        .flat_map(|d| (0..=d).map(move |i| (i, d - i)))
        .map(|(i, j)| {
            RingElement::monomial(&ring, Monomial(vec![i64::from(i), i64::from(j)]), BigInt::one())
        })
        .collect();
    let mut checks = Vec::new();
    for k in 0..stages {
        let components = 1usize << k;
        let mut first_failure = None;
        let mut generators = 0;
        for w in 0..components {
            for m in &monomials {
                let mut g = vec![RingElement::zero(&ring); components];
                g[w] = m.clone();
                generators += 1;
                if first_failure.is_none() && !decomposes(&g) {
                    first_failure = Some(format!("{m} e_{w}"));
                }
            }
        }
        checks.push(StageCheck { stage: k, components, generators, all_decompose: first_failure.is_none(), first_failure });
    }
    let zero_section_ok = {
        let z = vec![RingElement::zero(&ring)];
        let (s, t) = pullback_decompose(&z);
        decomposes(&z) && s.iter().chain(&t).all(RingElement::is_zero)
    };
    let identity_certified = zero_section_ok && checks.iter().all(|c| c.all_decompose);
    let conclusion = if identity_certified {
        "<x,y> Gamma(U,W) = Gamma(U,W) on all checked generators; a nonzero free module M over Z[x,y] has <x,y> M != M, so W is not free"
            .into()
    } else {
        "identity not certified".into()
    };
    Ok(NonfreeReport { stages, degree_bound, checks, zero_section_ok, identity_certified, conclusion })
}

impl fmt::Display for NonfreeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pullback to A^2 - {{0}}: {} stages, degree <= {}", self.stages, self.degree_bound)?;
        for c in &self.checks {
            writeln!(
                f,
                "  stage {}: {} components, {} generators, {}",
                c.stage,
                c.components,
                c.generators,
                if c.all_decompose { "all decompose".to_string() } else { format!("fails at {}", c.first_failure.as_deref().unwrap_or("?")) }
            )?;
        }
        writeln!(f, "  zero section: {}", if self.zero_section_ok { "0 = x*0 + y*0" } else { "FAILED" })?;
        write!(f, "{}", self.conclusion)
    }
}
