//! JSON formats for ring data and fibration models.
//!
//! Ring file:
//!
//! ```json
//! { "name": "P2", "dimension": 2,
//!   "cells": [{"codim": 0, "index": 1, "label": "1"}, ...],
//!   "products": [{"left_label": "h", "right_label": "h", "result": [{"label": "h^2", "coeff": 1}]}],
//!   "correspondences": [{"name": "diag", "terms": [{"left": "h", "right": "h", "coeff": 1}]}] }
//! ```
//!
//! Omitted products are zero except those of the unit cell. A `dual` list of
//! `{"label", "dual"}` pairs overrides same-index duality.
//!
//! Fibration file: `base` and `fiber` are catalog names or inline ring
//! objects; `kind` is `"trivial"` or `"table"`, the latter with `t_products`
//! entries `{"left", "right", "components": [{"base_cycle": [{"label", "coeff"}], "generator"}]}`.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::catalog::{lookup_ring, projective_space};
use crate::correspondence::Correspondence;
use crate::error::{Error, Result};
use crate::fibration::{require_valid, trivial_fibration, FibrationModel};
use crate::ring::{kunneth_product, BasisCell, ChowRing, CoeffMode, Cycle, RingData};

/// Integer coefficient, either a JSON number or a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn value(&self) -> Result<BigInt> {
        match self {
            Coeff::Int(v) => Ok(BigInt::from(*v)),
            Coeff::Text(s) => s.trim().parse().map_err(|_| Error::InvalidRing(format!("bad coefficient {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub coeff: Coeff,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    #[serde(alias = "left")]
    pub left_label: String,
    #[serde(alias = "right")]
    pub right_label: String,
    #[serde(default)]
    pub result: Vec<Term>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualEntry {
    pub label: String,
    pub dual: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairTerm {
    pub left: String,
    pub right: String,
    pub coeff: Coeff,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrespondenceEntry {
    pub name: String,
    pub terms: Vec<PairTerm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    #[serde(default)]
    pub name: Option<String>,
    pub dimension: usize,
    pub cells: Vec<BasisCell>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    #[serde(default)]
    pub dual: Option<Vec<DualEntry>>,
    #[serde(default)]
    pub correspondences: Vec<CorrespondenceEntry>,
}

/// A parsed ring file.
#[derive(Debug, Clone)]
pub struct LoadedRing {
    pub ring: Arc<ChowRing>,
    pub correspondences: Vec<(String, Correspondence)>,
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, source_name: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn label_map(cells: &[BasisCell]) -> HashMap<&str, usize> {
    cells.iter().enumerate().map(|(i, c)| (c.label.as_str(), i)).collect()
}

fn ring_from_file(file: RingFile, default_name: &str) -> Result<LoadedRing> {
    let labels = label_map(&file.cells);
    let find = |l: &str| -> Result<usize> {
        labels.get(l).copied().ok_or_else(|| Error::InvalidRing(format!("unknown label {l:?}")))
    };
    let mut products = BTreeMap::new();
    for p in &file.products {
        let key = (find(&p.left_label)?, find(&p.right_label)?);
        let terms: Vec<(usize, BigInt)> =
            p.result.iter().map(|t| Ok((find(&t.label)?, t.coeff.value()?))).collect::<Result<_>>()?;
        if products.insert(key, terms).is_some() {
            return Err(Error::InvalidRing(format!("product {} * {} given twice", p.left_label, p.right_label)));
        }
    }
    let dual = match &file.dual {
        None => None,
        Some(entries) => {
            let mut d: Vec<Option<usize>> = vec![None; file.cells.len()];
            for e in entries {
                let (a, b) = (find(&e.label)?, find(&e.dual)?);
                d[a] = Some(b);
                d[b] = Some(a);
            }
            Some(
                d.into_iter()
                    .enumerate()
                    .map(|(i, v)| v.ok_or_else(|| Error::InvalidRing(format!("no dual for {}", file.cells[i].label))))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
    };
    let ring = ChowRing::from_data(RingData {
        name: file.name.clone().unwrap_or_else(|| default_name.to_string()),
        dimension: file.dimension,
        cells: file.cells.clone(),
        products,
        dual,
    })?;
    let mut correspondences = Vec::new();
    if !file.correspondences.is_empty() {
        let prod = kunneth_product(&ring, &ring);
        let factors = prod.factors().expect("product ring");
        for entry in &file.correspondences {
            let mut coeffs = vec![num_rational::BigRational::from_integer(0.into()); prod.len()];
            for t in &entry.terms {
                let a = ring.find_label(&t.left).ok_or_else(|| Error::InvalidRing(format!("unknown label {:?}", t.left)))?;
                let b =
                    ring.find_label(&t.right).ok_or_else(|| Error::InvalidRing(format!("unknown label {:?}", t.right)))?;
                coeffs[factors.cell(a, b)] += num_rational::BigRational::from_integer(t.coeff.value()?);
            }
            let cycle = Cycle::from_coeffs(&prod, CoeffMode::Integer, coeffs)?;
            correspondences.push((entry.name.clone(), Correspondence::from_cycle(&cycle)?));
        }
    }
    Ok(LoadedRing { ring, correspondences })
}

pub fn parse_ring(text: &str, source_name: &str) -> Result<LoadedRing> {
    let file: RingFile = parse_json(text, source_name)?;
    ring_from_file(file, source_name)
}

pub fn load_ring(path: &Path) -> Result<LoadedRing> {
    let text = std::fs::read_to_string(path)?;
    parse_ring(&text, &path.display().to_string())
}

/// Serializes a ring in the ring-file format.
pub fn ring_to_file(ring: &ChowRing) -> RingFile {
    let mut products = Vec::new();
    for i in 1..ring.len() {
        for j in i..ring.len() {
            let terms = ring.product_terms(i, j);
            if terms.is_empty() {
                continue;
            }
            products.push(ProductEntry {
                left_label: ring.cell(i).label.clone(),
                right_label: ring.cell(j).label.clone(),
                result: terms
                    .iter()
                    .map(|(k, v)| Term { label: ring.cell(*k).label.clone(), coeff: Coeff::Text(v.to_string()) })
                    .collect(),
            });
        }
    }
    let same_index = (0..ring.len()).all(|i| ring.cell(ring.dual(i)).index == ring.cell(i).index);
    let dual = (!same_index).then(|| {
        (0..ring.len())
            .filter(|&i| i <= ring.dual(i))
            .map(|i| DualEntry { label: ring.cell(i).label.clone(), dual: ring.cell(ring.dual(i)).label.clone() })
            .collect()
    });
    RingFile {
        name: Some(ring.name().to_string()),
        dimension: ring.dimension(),
        cells: ring.cells().to_vec(),
        products,
        dual,
        correspondences: Vec::new(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingRef {
    Catalog(String),
    Inline(Box<RingFile>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Component {
    pub base_cycle: Vec<Term>,
    pub generator: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TProduct {
    pub left: String,
    pub right: String,
    #[serde(default)]
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Trivial,
    #[default]
    Table,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationFile {
    #[serde(default)]
    pub name: Option<String>,
    pub base: RingRef,
    pub fiber: RingRef,
    #[serde(default)]
    pub kind: ModelKind,
    #[serde(default)]
    pub t_products: Vec<TProduct>,
}

fn resolve(r: &RingRef, what: &str) -> Result<Arc<ChowRing>> {
    match r {
        RingRef::Catalog(name) if name == "point" => Ok(projective_space(0)),
        RingRef::Catalog(name) => lookup_ring(name),
        RingRef::Inline(file) => Ok(ring_from_file((**file).clone(), what)?.ring),
    }
}

/// Parses and validates a fibration file.
pub fn parse_fibration(text: &str, source_name: &str) -> Result<Arc<FibrationModel>> {
    let file: FibrationFile = parse_json(text, source_name)?;
    let base = resolve(&file.base, "base")?;
    let fiber = resolve(&file.fiber, "fiber")?;
    if file.kind == ModelKind::Trivial {
        if !file.t_products.is_empty() {
            return Err(Error::InvalidModel("a trivial model takes no t_products".into()));
        }
        return trivial_fibration(&base, &fiber);
    }
    let gen = |l: &str| -> Result<usize> {
        fiber.find_label(l).ok_or_else(|| Error::InvalidModel(format!("unknown generator {l:?}")))
    };
    let mut entries = Vec::new();
    for p in &file.t_products {
        let mut comps = Vec::new();
        for c in &p.components {
            let terms: Vec<(&str, BigInt)> =
                c.base_cycle.iter().map(|t| Ok((t.label.as_str(), t.coeff.value()?))).collect::<Result<_>>()?;
            let mut coeffs = vec![num_rational::BigRational::from_integer(0.into()); base.len()];
            for (l, v) in terms {
                let x = base.find_label(l).ok_or_else(|| Error::InvalidModel(format!("unknown base label {l:?}")))?;
                coeffs[x] += num_rational::BigRational::from_integer(v);
            }
            comps.push((gen(&c.generator)?, Cycle::from_coeffs(&base, CoeffMode::Integer, coeffs)?));
        }
        entries.push(((gen(&p.left)?, gen(&p.right)?), comps));
    }
    let name = file.name.clone().unwrap_or_else(|| source_name.to_string());
    let model = FibrationModel::from_table(name, base, fiber, entries)?;
    require_valid(&model)?;
    Ok(model)
}

pub fn load_fibration(path: &Path) -> Result<Arc<FibrationModel>> {
    let text = std::fs::read_to_string(path)?;
    parse_fibration(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::grassmannian;

    const P2: &str = r#"{
  "dimension": 2,
  "cells": [
    {"codim": 0, "index": 1, "label": "1"},
    {"codim": 1, "index": 1, "label": "h"},
    {"codim": 2, "index": 1, "label": "pt"}
  ],
  "products": [{"left_label": "h", "right_label": "h", "result": [{"label": "pt", "coeff": 1}]}],
  "correspondences": [{"name": "diag", "terms": [
    {"left": "1", "right": "pt", "coeff": 1},
    {"left": "h", "right": "h", "coeff": 1},
    {"left": "pt", "right": "1", "coeff": 1}]}]
}"#;

    #[test]
    fn parses_ring_and_correspondence() {
        let loaded = parse_ring(P2, "p2.json").unwrap();
        assert_eq!(loaded.ring.ranks(), vec![1, 1, 1]);
        let (_, d) = &loaded.correspondences[0];
        assert!(d.action_matrix().is_identity());
    }

    #[test]
    fn located_parse_error() {
        let broken = P2.replace("\"index\": 1, \"label\": \"h\"", "\"index\": 1 \"label\": \"h\"");
        match parse_ring(&broken, "p2.json") {
            Err(Error::Parse { line, source_name, .. }) => {
                assert_eq!(line, 5);
                assert_eq!(source_name, "p2.json");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn ring_file_round_trip() {
        let g = grassmannian(2, 4).unwrap();
        let text = serde_json::to_string(&ring_to_file(&g)).unwrap();
        let back = parse_ring(&text, "gr24").unwrap().ring;
        assert_eq!(*back, *g);
    }

    #[test]
    fn fibration_files() {
        let trivial = r#"{"base": "p1", "fiber": "p1", "kind": "trivial"}"#;
        assert_eq!(parse_fibration(trivial, "t").unwrap().len(), 4);
        let f1 = r#"{"name": "F1", "base": "p1", "fiber": "p1", "t_products": [
            {"left": "h", "right": "h", "components": [{"base_cycle": [{"label": "h", "coeff": -1}], "generator": "h"}]}]}"#;
        let m = parse_fibration(f1, "f1").unwrap();
        assert_eq!(m.product_coords(1, 1), crate::catalog::hirzebruch(1).unwrap().product_coords(1, 1));
        let bad = r#"{"base": "p1", "fiber": "p1", "t_products": [
            {"left": "h", "right": "1", "components": [{"base_cycle": [{"label": "1", "coeff": 2}], "generator": "h"}]}]}"#;
        assert!(matches!(parse_fibration(bad, "bad"), Err(Error::InvalidModel(_))));
    }
}
