use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{
    parse_element, CoeffRing, HomRegistry, Ring, RingDescriptor, RingError, RingHom, SectionRule,
};

/// JSON form of a ring, e.g. `{"kind": "laurent", "var": "u", "coeff": "Z"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingJson {
    Integers,
    Residue { modulus: u64 },
    Polynomial { vars: Vec<String>, coeff: String },
    Laurent { var: String, coeff: String },
}

/// An element together with its ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub ring: RingJson,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SectionJson {
    ResidueLift,
    LaurentSplit { positive: String, negative: String },
    /// Target variable name -> source variable name.
    Variables { map: BTreeMap<String, String> },
    None,
}

/// One entry of a `homs.json` registry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomJson {
    pub name: String,
    pub source: RingJson,
    pub target: RingJson,
    /// Source generator -> image expression in the target.
    #[serde(default)]
    pub images: BTreeMap<String, String>,
    pub section: SectionJson,
    #[serde(default = "default_true")]
    pub surjective: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RegistryJson {
    pub homs: Vec<HomJson>,
}

fn coeff_from_str(s: &str) -> Result<CoeffRing, RingError> {
    if s == "Z" {
        return Ok(CoeffRing::Integers);
    }
    s.strip_prefix("Z/")
        .and_then(|m| m.parse::<BigInt>().ok())
        .map(CoeffRing::Residue)
        .ok_or_else(|| RingError::InvalidDescriptor(format!("unknown coefficient ring `{s}`")))
}

fn coeff_to_str(c: &CoeffRing) -> String {
    match c {
        CoeffRing::Integers => "Z".into(),
        CoeffRing::Residue(m) => format!("Z/{m}"),
    }
}

pub fn ring_from_json(j: &RingJson) -> Result<Ring, RingError> {
    let d = match j {
        RingJson::Integers => RingDescriptor::Integers,
        RingJson::Residue { modulus } => RingDescriptor::residue(*modulus)?,
        RingJson::Polynomial { vars, coeff } => {
            RingDescriptor::polynomial(vars, coeff_from_str(coeff)?)?
        }
        RingJson::Laurent { var, coeff } => RingDescriptor::laurent(var, coeff_from_str(coeff)?)?,
    };
    Ok(Arc::new(d))
}

pub fn ring_to_json(r: &RingDescriptor) -> RingJson {
    match r {
        RingDescriptor::Integers => RingJson::Integers,
        RingDescriptor::Residue { modulus } => RingJson::Residue {
            modulus: u64::try_from(modulus).expect("modulus fits in u64"),
        },
        RingDescriptor::Polynomial { vars, coeff } => {
            RingJson::Polynomial { vars: vars.clone(), coeff: coeff_to_str(coeff) }
        }
        RingDescriptor::Laurent { var, coeff } => {
            RingJson::Laurent { var: var.clone(), coeff: coeff_to_str(coeff) }
        }
    }
}

impl HomJson {
    pub fn to_hom(&self) -> Result<RingHom, RingError> {
        let source = ring_from_json(&self.source)?;
        let target = ring_from_json(&self.target)?;
        let mut images = Vec::new();
        for v in source.variables() {
            let text = self
                .images
                .get(v)
                .ok_or_else(|| RingError::InvalidHom(format!("no image for generator `{v}`")))?;
            images.push(parse_element(&target, text)?);
        }
        if let Some(extra) = self.images.keys().find(|k| source.var_index(k).is_none()) {
            return Err(RingError::UnknownVariable(extra.clone()));
        }
        let src_index = |name: &str| {
            source.var_index(name).ok_or_else(|| RingError::UnknownVariable(name.to_string()))
        };
        let section = match &self.section {
            SectionJson::ResidueLift => SectionRule::ResidueLift,
            SectionJson::None => SectionRule::None,
            SectionJson::LaurentSplit { positive, negative } => SectionRule::LaurentSplit {
                positive: src_index(positive)?,
                negative: src_index(negative)?,
            },
            SectionJson::Variables { map } => {
                let mut vars = Vec::new();
                for t in target.variables() {
                    let s = map.get(t).ok_or_else(|| {
                        RingError::InvalidHom(format!("section has no entry for `{t}`"))
                    })?;
                    vars.push(src_index(s)?);
                }
                SectionRule::Variables { vars }
            }
        };
        RingHom::new(&self.name, source, target, images, section, self.surjective)
    }

    pub fn from_hom(h: &RingHom) -> Self {
        let src_vars = h.source().variables();
        let tgt_vars = h.target().variables();
        let images = src_vars
            .iter()
            .zip(h.images())
            .map(|(v, e)| (v.to_string(), e.to_string()))
            .collect();
        let section = match h.section_rule() {
            SectionRule::ResidueLift => SectionJson::ResidueLift,
            SectionRule::None => SectionJson::None,
            SectionRule::LaurentSplit { positive, negative } => SectionJson::LaurentSplit {
                positive: src_vars[*positive].to_string(),
                negative: src_vars[*negative].to_string(),
            },
            SectionRule::Variables { vars } => SectionJson::Variables {
                map: tgt_vars
                    .iter()
                    .zip(vars)
                    .map(|(t, &s)| (t.to_string(), src_vars[s].to_string()))
                    .collect(),
            },
        };
        HomJson {
            name: h.name().to_string(),
            source: ring_to_json(h.source()),
            target: ring_to_json(h.target()),
            images,
            section,
            surjective: h.is_surjective(),
        }
    }
}

impl HomRegistry {
    /// Adds every hom of a `homs.json` document, replacing same-named entries.
    pub fn extend_from_json(&mut self, text: &str) -> Result<(), RingError> {
        let doc: RegistryJson = serde_json::from_str(text)
            .map_err(|e| RingError::InvalidHom(format!("registry: {e}")))?;
        for h in &doc.homs {
            self.insert(h.to_hom()?);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::builtin_registry;

    #[test]
    fn ring_roundtrip() {
        let j: RingJson =
            serde_json::from_str(r#"{"kind":"laurent","var":"u","coeff":"Z"}"#).unwrap();
        let r = ring_from_json(&j).unwrap();
        assert_eq!(r.to_string(), "Z[u^±]");
        assert_eq!(ring_to_json(&r), j);
        let j = RingJson::Polynomial { vars: vec!["x".into()], coeff: "Z/5".into() };
        assert_eq!(ring_to_json(&ring_from_json(&j).unwrap()), j);
        assert!(ring_from_json(&RingJson::Residue { modulus: 1 }).is_err());
    }

    #[test]
    fn hom_roundtrip() {
        let reg = builtin_registry();
        for h in reg.iter() {
            let j = HomJson::from_hom(h);
            let back = j.to_hom().unwrap();
            assert_eq!(HomJson::from_hom(&back), j);
        }
    }

    #[test]
    fn registry_file() {
        let text = r#"{"homs":[{"name":"swap","source":{"kind":"polynomial","vars":["a","b"],"coeff":"Z"},
            "target":{"kind":"polynomial","vars":["s","t"],"coeff":"Z/3"},
            "images":{"a":"t","b":"s"},"section":{"kind":"variables","map":{"s":"b","t":"a"}}}]}"#;
        let mut reg = HomRegistry::default();
        reg.extend_from_json(text).unwrap();
        let h = reg.get("swap").unwrap();
        let b = parse_element(h.target(), "2*s^2*t + 1").unwrap();
        assert_eq!(h.apply(&h.section(&b).unwrap()).unwrap(), b);
    }
}
