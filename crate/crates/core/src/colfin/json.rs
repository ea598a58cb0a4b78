use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BlockPairing, ColFinError, ColFinMatrix, Dense, ElementaryForm, Form, IndexBijection, IndexSet, Side};
use crate::ring::{parse_element, Ring, RingElement};

type Rows = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BijectionJson {
    /// Explicit images; unmentioned indices are fixed.
    Finite(BTreeMap<String, usize>),
    BlockPeriodic { offset: usize, perm: Vec<usize> },
    PairSwap(BlockPairing),
}

/// JSON form of a structured matrix. Entries are expressions in the ring
/// supplied by the context (the hom's target, for lifting inputs).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatrixJson {
    Identity,
    FinitePerturbation {
        corner: Rows,
    },
    Elementary {
        #[serde(rename = "J")]
        j: IndexSet,
        #[serde(default)]
        cols: BTreeMap<String, BTreeMap<String, String>>,
    },
    PairedElementary {
        pairing: BlockPairing,
        side: Side,
        block: Rows,
    },
    Permutation {
        sigma: BijectionJson,
    },
    SignFlip {
        set: IndexSet,
    },
    ScalarDiagonal {
        #[serde(default)]
        prefix: Vec<String>,
        tail: String,
    },
    BlockDiagonal {
        #[serde(default)]
        prefix: Vec<Rows>,
        #[serde(default)]
        tail: Option<Rows>,
    },
    Product {
        factors: Vec<MatrixJson>,
    },
}

fn index(s: &str) -> Result<usize, ColFinError> {
    s.parse().map_err(|_| ColFinError::Invalid(format!("bad index `{s}`")))
}

fn elem(ring: &Ring, s: &str) -> Result<RingElement, ColFinError> {
    Ok(parse_element(ring, s)?)
}

fn dense_from(ring: &Ring, rows: &Rows) -> Result<Dense, ColFinError> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| elem(ring, s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Dense::from_rows(ring, parsed)?)
}

/// Rendered rows of a dense matrix (also the window dump format).
pub fn window_to_json(d: &Dense) -> Rows {
    d.render()
}

pub fn matrix_from_json(j: &MatrixJson, ring: &Ring) -> Result<ColFinMatrix, ColFinError> {
    match j {
        MatrixJson::Identity => Ok(ColFinMatrix::identity(ring)),
        MatrixJson::FinitePerturbation { corner } => {
            ColFinMatrix::finite_perturbation(dense_from(ring, corner)?)
        }
        MatrixJson::Elementary { j, cols } => {
            let mut parsed = BTreeMap::new();
            for (c, col) in cols {
                let mut pc = BTreeMap::new();
                for (r, s) in col {
                    pc.insert(index(r)?, elem(ring, s)?);
                }
                parsed.insert(index(c)?, pc);
            }
            ColFinMatrix::elementary(ring, j.clone(), parsed)
        }
        MatrixJson::PairedElementary { pairing, side, block } => {
            ColFinMatrix::paired_elementary(pairing.clone(), *side, dense_from(ring, block)?)
        }
        MatrixJson::Permutation { sigma } => {
            let b = match sigma {
                BijectionJson::Finite(map) => {
                    let map = map
                        .iter()
                        .map(|(k, v)| Ok((index(k)?, *v)))
                        .collect::<Result<BTreeMap<_, _>, ColFinError>>()?;
                    IndexBijection::from_map(&map)
                }
                BijectionJson::BlockPeriodic { offset, perm } => {
                    IndexBijection::block_periodic(*offset, perm.clone())
                }
                BijectionJson::PairSwap(p) => Ok(IndexBijection::PairSwap(p.clone())),
            }
            .map_err(ColFinError::Invalid)?;
            ColFinMatrix::permutation(ring, b)
        }
        MatrixJson::SignFlip { set } => ColFinMatrix::sign_flip(ring, set.clone()),
        MatrixJson::ScalarDiagonal { prefix, tail } => ColFinMatrix::scalar_diagonal(
            ring,
            prefix.iter().map(|s| elem(ring, s)).collect::<Result<_, _>>()?,
            elem(ring, tail)?,
        ),
        MatrixJson::BlockDiagonal { prefix, tail } => ColFinMatrix::block_diagonal(
            ring,
            prefix.iter().map(|b| dense_from(ring, b)).collect::<Result<_, _>>()?,
            tail.as_ref().map(|b| dense_from(ring, b)).transpose()?,
        ),
        MatrixJson::Product { factors } => {
            let fs = factors.iter().map(|f| matrix_from_json(f, ring)).collect::<Result<_, _>>()?;
            ColFinMatrix::product(ring, fs)
        }
    }
}

pub fn matrix_to_json(m: &ColFinMatrix) -> MatrixJson {
    match m.form() {
        Form::Identity => MatrixJson::Identity,
        Form::FinitePerturbation { corner } => MatrixJson::FinitePerturbation { corner: corner.render() },
        Form::Elementary(ElementaryForm::Finite { j, cols }) => MatrixJson::Elementary {
            j: j.clone(),
            cols: cols
                .iter()
                .map(|(c, col)| {
                    (c.to_string(), col.iter().map(|(r, v)| (r.to_string(), v.to_string())).collect())
                })
                .collect(),
        },
        Form::Elementary(ElementaryForm::Paired { pairing, side, block }) => {
            MatrixJson::PairedElementary { pairing: pairing.clone(), side: *side, block: block.render() }
        }
        Form::Permutation(sigma) => MatrixJson::Permutation {
            sigma: match sigma {
                IndexBijection::Finite { forward, .. } => BijectionJson::Finite(
                    forward.iter().enumerate().filter(|(i, t)| i != *t).map(|(i, t)| (i.to_string(), *t)).collect(),
                ),
                IndexBijection::BlockPeriodic { offset, perm, .. } => {
                    BijectionJson::BlockPeriodic { offset: *offset, perm: perm.clone() }
                }
                IndexBijection::PairSwap(p) => BijectionJson::PairSwap(p.clone()),
            },
        },
        Form::SignFlip(set) => MatrixJson::SignFlip { set: set.clone() },
        Form::ScalarDiagonal { prefix, tail } => MatrixJson::ScalarDiagonal {
            prefix: prefix.iter().map(ToString::to_string).collect(),
            tail: tail.to_string(),
        },
        Form::BlockDiagonal { prefix, tail } => MatrixJson::BlockDiagonal {
            prefix: prefix.iter().map(Dense::render).collect(),
            tail: tail.as_ref().map(Dense::render),
        },
        Form::Product(fs) => MatrixJson::Product { factors: fs.iter().map(matrix_to_json).collect() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoeffRing, RingDescriptor};
    use std::sync::Arc;

    #[test]
    fn documented_examples_parse() {
        let zu: Ring = Arc::new(RingDescriptor::laurent("u", CoeffRing::Integers).unwrap());
        let j: MatrixJson =
            serde_json::from_str(r#"{"form":"scalar_diagonal","prefix":[],"tail":"u"}"#).unwrap();
        let m = matrix_from_json(&j, &zu).unwrap();
        assert_eq!(m.column(3).get(&3).unwrap().to_string(), "u");

        let zxy: Ring =
            Arc::new(RingDescriptor::polynomial(&["x", "y"], CoeffRing::Integers).unwrap());
        let j: MatrixJson = serde_json::from_str(
            r#"{"form":"elementary","J":{"finite":[0]},"cols":{"0":{"1":"x"}}}"#,
        )
        .unwrap();
        let e = matrix_from_json(&j, &zxy).unwrap();
        assert_eq!(e.entry(1, 0).to_string(), "x");
        assert_eq!(matrix_to_json(&e), j);

        let j: MatrixJson = serde_json::from_str(
            r#"{"form":"product","factors":[{"form":"identity"},
                {"form":"permutation","sigma":{"finite":{"0":1,"1":0}}}]}"#,
        )
        .unwrap();
        let p = matrix_from_json(&j, &zxy).unwrap();
        assert!(p.entry(1, 0).is_one());
        let back = matrix_from_json(&matrix_to_json(&p), &zxy).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rejects_bad_input() {
        let z: Ring = Arc::new(RingDescriptor::Integers);
        let j: MatrixJson =
            serde_json::from_str(r#"{"form":"finite_perturbation","corner":[["1","2"],["3"]]}"#)
                .unwrap();
        assert!(matrix_from_json(&j, &z).is_err());
        assert!(serde_json::from_str::<MatrixJson>(r#"{"form":"bogus"}"#).is_err());
    }
}
