use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

use super::{Monomial, Payload, Ring, RingDescriptor, RingElement, RingError};
use crate::ring::CoeffRing;

/// How target elements are lifted back to the source. Every rule is applied
/// monomial by monomial, so the zero element always lifts to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionRule {
    /// `Z -> Z/m` (or coefficient rings alike): residues lift to `[0, m)`.
    ResidueLift,
    /// Polynomial source onto a Laurent target: `u^k` lifts to the
    /// `positive` variable to the `k`, `u^-k` to the `negative` variable.
    LaurentSplit { positive: usize, negative: usize },
    /// Target variable `t` lifts to source variable `vars[t]`.
    Variables { vars: Vec<usize> },
    /// No section registered.
    None,
}

/// A ring map given on generators, with a zero-preserving element section.
#[derive(Debug, Clone)]
pub struct RingHom {
    name: String,
    source: Ring,
    target: Ring,
    images: Vec<RingElement>,
    section: SectionRule,
    surjective: bool,
}

impl RingHom {
    pub fn new(
        name: &str,
        source: Ring,
        target: Ring,
        images: Vec<RingElement>,
        section: SectionRule,
        surjective: bool,
    ) -> Result<Self, RingError> {
        let nvars = source.variables().len();
        if images.len() != nvars {
            return Err(RingError::InvalidHom(format!(
                "{nvars} generators but {} images",
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|e| e.ring() != &target) {
            return Err(RingError::InvalidHom(format!("image `{bad}` is not in {target}")));
        }
        // Z/m can only map to rings whose characteristic divides m.
        if let Some(m) = source.characteristic() {
            match target.characteristic() {
                Some(t) if m.is_multiple_of(&t) => {}
                _ => {
                    return Err(RingError::InvalidHom(format!(
                        "characteristic of {target} does not divide {m}"
                    )))
                }
            }
        }
        if source.is_laurent() && !images[0].is_unit() {
            return Err(RingError::InvalidHom("Laurent generator must map to a unit".into()));
        }
        let tvars = target.variables().len();
        match &section {
            SectionRule::ResidueLift => {
                if source.has_monomials() || target.has_monomials() {
                    return Err(RingError::InvalidHom("residue_lift needs scalar rings".into()));
                }
            }
            SectionRule::LaurentSplit { positive, negative } => {
                if !target.is_laurent() || *positive >= nvars || *negative >= nvars || source.is_laurent()
                {
                    return Err(RingError::InvalidHom("laurent_split shape mismatch".into()));
                }
            }
            SectionRule::Variables { vars } => {
                if vars.len() != tvars || vars.iter().any(|&v| v >= nvars) {
                    return Err(RingError::InvalidHom("variables section shape mismatch".into()));
                }
                if target.is_laurent() && !source.is_laurent() {
                    return Err(RingError::InvalidHom(
                        "negative exponents cannot lift into a polynomial ring".into(),
                    ));
                }
            }
            SectionRule::None => {}
        }
        Ok(RingHom { name: name.to_string(), source, target, images, section, surjective })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[RingElement] {
        &self.images
    }

    pub fn section_rule(&self) -> &SectionRule {
        &self.section
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    /// Substitutes the generator images and renormalises in the target.
    pub fn apply(&self, x: &RingElement) -> Result<RingElement, RingError> {
        if x.ring() != &self.source {
            return Err(RingError::Mismatch {
                left: x.ring().to_string(),
                right: self.source.to_string(),
            });
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &RingElement) -> RingElement {
        match x.payload() {
            Payload::Scalar(c) => RingElement::from_bigint(&self.target, c.clone()),
            Payload::Terms(terms) => {
                let mut acc = RingElement::zero(&self.target);
                for (m, c) in terms {
                    let mut t = RingElement::from_bigint(&self.target, c.clone());
                    for (img, &e) in self.images.iter().zip(&m.0) {
                        if e != 0 {
                            t = &t * &img.pow(e).expect("Laurent images are units");
                        }
                    }
                    acc = &acc + &t;
                }
                acc
            }
        }
    }

    /// Lifts `b` to the source, monomial by monomial; `section(0) = 0`.
    pub fn section(&self, b: &RingElement) -> Result<RingElement, RingError> {
        if b.ring() != &self.target {
            return Err(RingError::Mismatch {
                left: b.ring().to_string(),
                right: self.target.to_string(),
            });
        }
        if b.is_zero() {
            return Ok(RingElement::zero(&self.source));
        }
        let nsrc = self.source.variables().len();
        match (&self.section, b.payload()) {
            (SectionRule::ResidueLift, Payload::Scalar(c)) => {
                Ok(RingElement::from_bigint(&self.source, c.clone()))
            }
            (SectionRule::LaurentSplit { positive, negative }, Payload::Terms(terms)) => {
                let lifted = terms.iter().map(|(m, c)| {
                    let k = m.0[0];
                    let mut exps = vec![0i64; nsrc];
                    if k >= 0 {
                        exps[*positive] = k;
                    } else {
                        exps[*negative] = -k;
                    }
                    (Monomial(exps), c.clone())
                });
                RingElement::from_terms(&self.source, lifted)
            }
            (SectionRule::Variables { vars }, Payload::Terms(terms)) => {
                let lifted = terms.iter().map(|(m, c)| {
                    let mut exps = vec![0i64; nsrc];
                    for (t, &e) in m.0.iter().enumerate() {
                        exps[vars[t]] += e;
                    }
                    (Monomial(exps), c.clone())
                });
                RingElement::from_terms(&self.source, lifted)
            }
            _ => Err(RingError::NoSection(b.to_string())),
        }
    }
}

/// Named homomorphisms, as read from a `homs.json` registry.
#[derive(Debug, Clone, Default)]
pub struct HomRegistry {
    homs: BTreeMap<String, RingHom>,
}

impl HomRegistry {
    pub fn insert(&mut self, hom: RingHom) {
        self.homs.insert(hom.name().to_string(), hom);
    }

    pub fn get(&self, name: &str) -> Option<&RingHom> {
        self.homs.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.homs.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &RingHom> {
        self.homs.values()
    }
}

/// Registry with the standard maps: `zxy_to_laurent` (`x -> u`, `y -> u^-1`)
/// and reductions `z_to_zN` for a few moduli.
pub fn builtin_registry() -> HomRegistry {
    let mut reg = HomRegistry::default();
    let zxy = Arc::new(RingDescriptor::polynomial(&["x", "y"], CoeffRing::Integers).unwrap());
    let zu = Arc::new(RingDescriptor::laurent("u", CoeffRing::Integers).unwrap());
    let u = RingElement::var(&zu, "u").unwrap();
    let images = vec![u.clone(), u.inverse().unwrap()];
    reg.insert(
        RingHom::new(
            "zxy_to_laurent",
            zxy,
            zu,
            images,
            SectionRule::LaurentSplit { positive: 0, negative: 1 },
            true,
        )
        .unwrap(),
    );
    let z = Arc::new(RingDescriptor::Integers);
    for m in [2u32, 3, 5, 7, 101] {
        let zm = Arc::new(RingDescriptor::residue(BigInt::from(m)).unwrap());
        reg.insert(
            RingHom::new(&format!("z_to_z{m}"), z.clone(), zm, vec![], SectionRule::ResidueLift, true)
                .unwrap(),
        );
    }
    let zx = Arc::new(RingDescriptor::polynomial(&["x"], CoeffRing::Integers).unwrap());
    let z5x = Arc::new(RingDescriptor::polynomial(&["x"], CoeffRing::Residue(5.into())).unwrap());
    let x5 = RingElement::var(&z5x, "x").unwrap();
    reg.insert(
        RingHom::new("zx_to_z5x", zx, z5x, vec![x5], SectionRule::Variables { vars: vec![0] }, true)
            .unwrap(),
    );
    reg
}

impl RingHom {
    pub fn has_section(&self) -> bool {
        self.section != SectionRule::None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_element;

    #[test]
    fn flagship_apply_and_section() {
        let reg = builtin_registry();
        let h = reg.get("zxy_to_laurent").unwrap();
        let xy = parse_element(h.source(), "x*y").unwrap();
        assert!(h.apply(&xy).unwrap().is_one());
        let e = parse_element(h.source(), "3*x^2").unwrap();
        assert_eq!(h.apply(&e).unwrap(), parse_element(h.target(), "3*u^2").unwrap());
        assert!(h.apply(&RingElement::zero(h.source())).unwrap().is_zero());

        let b = parse_element(h.target(), "u^-3").unwrap();
        let a = h.section(&b).unwrap();
        assert_eq!(a, parse_element(h.source(), "y^3").unwrap());
        assert_eq!(h.apply(&a).unwrap(), b);

        let b = parse_element(h.target(), "5*u^2 - u^-1").unwrap();
        let a = h.section(&b).unwrap();
        assert_eq!(a, parse_element(h.source(), "5*x^2 - y").unwrap());
        assert_eq!(h.apply(&a).unwrap(), b);
        assert!(h.section(&RingElement::zero(h.target())).unwrap().is_zero());
    }

    #[test]
    fn residue_section() {
        let reg = builtin_registry();
        let h = reg.get("z_to_z5").unwrap();
        let b = RingElement::from_int(h.target(), 3);
        assert_eq!(h.section(&b).unwrap().as_constant(), Some(BigInt::from(3)));
        assert!(h.section(&RingElement::one(h.source())).is_err());
    }

    #[test]
    fn rejects_bad_homs() {
        let z5 = Arc::new(RingDescriptor::residue(5).unwrap());
        let z7 = Arc::new(RingDescriptor::residue(7).unwrap());
        assert!(RingHom::new("bad", z5, z7, vec![], SectionRule::ResidueLift, true).is_err());
    }
}
