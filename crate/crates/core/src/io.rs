//! JSON file formats for algebras, Bochvar systems and semilattice direct
//! systems.
//!
//! Algebra file:
//! `{"name", "elements", "ops": {"zero", "one", "not", "j2"?, "and", "or"}}`
//! with `not`/`j2` as name maps and `and`/`or` as row-major tables.
//!
//! System file: `{"boolean": {"atoms": [..]} | <algebra>, "subsemilattice": [..]}`.
//!
//! Direct-system file:
//! `{"index": {"elements", "order": [[i, j], ..]}, "fibres": {i: <algebra>}, "homs": {"i->j": {..}}}`.

use std::collections::BTreeMap;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraSpec, FiniteAlgebra};
use crate::boolean::{boolean_from_atoms, BooleanAlgebra, BooleanError};
use crate::equivalence::{BochvarSystem, EquivalenceError};
use crate::plonka::SemilatticeDirectSystem;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unrecognized file: expected an algebra, system or direct-system document")]
    UnknownDocument,
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Boolean(#[from] BooleanError),
    #[error(transparent)]
    System(#[from] EquivalenceError),
}

type Result<T> = std::result::Result<T, IoError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BooleanSpec {
    Atoms { atoms: Vec<String> },
    Inline(AlgebraSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub boolean: BooleanSpec,
    pub subsemilattice: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSpec {
    pub elements: Vec<String>,
    pub order: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectSystemSpec {
    pub index: IndexSpec,
    pub fibres: IndexMap<String, AlgebraSpec>,
    #[serde(default)]
    pub homs: IndexMap<String, IndexMap<String, String>>,
}

/// A parsed file of any of the three kinds.
#[derive(Debug, Clone)]
pub enum Document {
    Algebra(FiniteAlgebra),
    System(BochvarSystem),
    DirectSystem(SemilatticeDirectSystem),
}

pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let spec: AlgebraSpec = serde_json::from_str(text)?;
    Ok(FiniteAlgebra::from_spec(&spec)?)
}

pub fn algebra_to_json(a: &FiniteAlgebra) -> String {
    to_pretty(&a.to_spec())
}

fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn system_from_spec(spec: &SystemSpec) -> Result<BochvarSystem> {
    let boolean = match &spec.boolean {
        BooleanSpec::Atoms { atoms } => boolean_from_atoms(atoms)?,
        BooleanSpec::Inline(a) => BooleanAlgebra::from_algebra(&FiniteAlgebra::from_spec(a)?)?,
    };
    Ok(BochvarSystem::from_names(boolean, &spec.subsemilattice)?)
}

/// The atoms form is used when the Boolean algebra is exactly the
/// powerset algebra on its atom names; otherwise it is written inline.
pub fn system_to_spec(s: &BochvarSystem) -> SystemSpec {
    let b = s.boolean();
    let atoms: Vec<String> = b.atoms().iter().map(|&e| b.name_of(e).to_string()).collect();
    let canonical = boolean_from_atoms(&atoms).is_ok_and(|c| c.algebra() == b.algebra());
    let boolean = if canonical { BooleanSpec::Atoms { atoms } } else { BooleanSpec::Inline(b.algebra().to_spec()) };
    let subsemilattice = s.subsemilattice().iter().map(|&e| b.name_of(e).to_string()).collect();
    SystemSpec { boolean, subsemilattice }
}

pub fn parse_system(text: &str) -> Result<BochvarSystem> {
    system_from_spec(&serde_json::from_str(text)?)
}

pub fn system_to_json(s: &BochvarSystem) -> String {
    to_pretty(&system_to_spec(s))
}

pub fn direct_system_from_spec(spec: &DirectSystemSpec) -> Result<SemilatticeDirectSystem> {
    let index = spec.index.elements.clone();
    let pos = |name: &str| {
        index.iter().position(|i| i == name).ok_or_else(|| IoError::Format(format!("unknown index `{name}`")))
    };
    let order = spec.index.order.iter().map(|(i, j)| Ok((pos(i)?, pos(j)?))).collect::<Result<Vec<_>>>()?;
    let mut fibres = Vec::with_capacity(index.len());
    for name in &index {
        let f = spec.fibres.get(name).ok_or_else(|| IoError::Format(format!("no fibre for index `{name}`")))?;
        fibres.push(FiniteAlgebra::from_spec(f)?);
    }
    if let Some(extra) = spec.fibres.keys().find(|k| !index.contains(k)) {
        return Err(IoError::Format(format!("fibre for unknown index `{extra}`")));
    }
    let mut homs = BTreeMap::new();
    for (key, map) in &spec.homs {
        let (i, j) = key.split_once("->").ok_or_else(|| IoError::Format(format!("hom key `{key}` is not `i->j`")))?;
        let (i, j) = (pos(i.trim())?, pos(j.trim())?);
        let (src, tgt) = (&fibres[i], &fibres[j]);
        let mut table = Vec::with_capacity(src.size());
        for e in src.elements() {
            let v = map.get(e).ok_or_else(|| IoError::Format(format!("hom `{key}` has no entry for `{e}`")))?;
            table.push(tgt.element(v).ok_or_else(|| IoError::Format(format!("hom `{key}` maps `{e}` to unknown `{v}`")))?);
        }
        homs.insert((i, j), table);
    }
    Ok(SemilatticeDirectSystem { index, order, fibres, homs })
}

pub fn direct_system_to_spec(s: &SemilatticeDirectSystem) -> DirectSystemSpec {
    let index = IndexSpec {
        elements: s.index.clone(),
        order: s.order.iter().map(|&(i, j)| (s.index[i].clone(), s.index[j].clone())).collect(),
    };
    let fibres = s.index.iter().zip(&s.fibres).map(|(n, f)| (n.clone(), f.to_spec())).collect();
    let homs = s
        .homs
        .iter()
        .map(|(&(i, j), map)| {
            let (src, tgt) = (&s.fibres[i], &s.fibres[j]);
            let m = src.carrier().map(|e| (src.element_name(e).to_string(), tgt.element_name(map[e]).to_string())).collect();
            (format!("{}->{}", s.index[i], s.index[j]), m)
        })
        .collect();
    DirectSystemSpec { index, fibres, homs }
}

pub fn parse_direct_system(text: &str) -> Result<SemilatticeDirectSystem> {
    direct_system_from_spec(&serde_json::from_str(text)?)
}

pub fn direct_system_to_json(s: &SemilatticeDirectSystem) -> String {
    to_pretty(&direct_system_to_spec(s))
}

/// Detects the kind of document from its top-level keys.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value.as_object().ok_or(IoError::UnknownDocument)?;
    if obj.contains_key("ops") {
        Ok(Document::Algebra(parse_algebra(text)?))
    } else if obj.contains_key("subsemilattice") {
        Ok(Document::System(parse_system(text)?))
    } else if obj.contains_key("fibres") {
        Ok(Document::DirectSystem(parse_direct_system(text)?))
    } else {
        Err(IoError::UnknownDocument)
    }
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })
}

pub fn write_string(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| IoError::Write { path: path.display().to_string(), source })
}
