//! JSON formats for finite systems and reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::decomposition::{dim_fix, is_topologically_ergodic, stabilize, DegreeTrace};
use crate::error::{Error, Result};
use crate::ordinal::OrdinalCNF;
use crate::partition::Partition;
use crate::topology::{FiniteSpace, FiniteSystem, SelfMap};

/// `{"points": [...], "specializes": [[x, y], ...], "map": {x: φ(x)}}`;
/// a pair `[x, y]` means `x ∈ cl{y}`. The relation is closed reflexively and
/// transitively on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub points: Vec<String>,
    #[serde(default)]
    pub specializes: Vec<(String, String)>,
    pub map: BTreeMap<String, String>,
}

impl SystemFile {
    pub fn to_system(&self) -> Result<FiniteSystem> {
        let space = FiniteSpace::build(&self.points, &self.specializes)?;
        let pairs: Vec<(String, String)> = self.map.clone().into_iter().collect();
        let map = SelfMap::validate_named(&space, &pairs)?;
        FiniteSystem::new(space, map.as_slice().to_vec())
    }

    /// Minimal file: only covering pairs of the preorder are listed.
    pub fn from_system(sys: &FiniteSystem) -> Self {
        let space = sys.space();
        SystemFile {
            points: space.names().to_vec(),
            specializes: space
                .covering_pairs()
                .into_iter()
                .map(|(x, y)| (space.name(x).to_owned(), space.name(y).to_owned()))
                .collect(),
            map: (0..sys.len())
                .map(|x| {
                    (
                        space.name(x).to_owned(),
                        space.name(sys.map().apply(x)).to_owned(),
                    )
                })
                .collect(),
        }
    }
}

fn format_error(e: serde_json::Error) -> Error {
    Error::Format(format!("line {} column {}: {e}", e.line(), e.column()))
}

pub fn parse_system(text: &str) -> Result<FiniteSystem> {
    serde_json::from_str::<SystemFile>(text)
        .map_err(format_error)?
        .to_system()
}

pub fn read_system(path: &std::path::Path) -> Result<FiniteSystem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_system(&text)
}

pub fn system_to_json(sys: &FiniteSystem) -> String {
    serde_json::to_string_pretty(&SystemFile::from_system(sys)).expect("serializable")
}

/// SHA-256 of the compact canonical system JSON.
pub fn system_hash(sys: &FiniteSystem) -> String {
    let text = serde_json::to_string(&SystemFile::from_system(sys)).expect("serializable");
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn named_classes(sys: &FiniteSystem, p: &Partition) -> Vec<Vec<String>> {
    p.classes().iter().map(|c| sys.space().names_of(c)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub degree: OrdinalCNF,
    pub classes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeReport {
    pub system_hash: String,
    pub points: usize,
    pub trace: Vec<DegreeEntry>,
    pub stabilization_degree: OrdinalCNF,
    pub classes: Vec<Vec<String>>,
    pub dim_fix: usize,
    pub ergodic: bool,
}

pub fn trace_entries(sys: &FiniteSystem, trace: &DegreeTrace) -> Vec<DegreeEntry> {
    trace
        .entries()
        .iter()
        .map(|(d, p)| DegreeEntry {
            degree: d.clone(),
            classes: named_classes(sys, p),
        })
        .collect()
}

pub fn decompose_report(sys: &FiniteSystem) -> DecomposeReport {
    let trace = stabilize(sys);
    DecomposeReport {
        system_hash: system_hash(sys),
        points: sys.len(),
        trace: trace_entries(sys, &trace),
        stabilization_degree: trace.stabilization_degree().clone(),
        classes: named_classes(sys, trace.stationary()),
        dim_fix: dim_fix(sys),
        ergodic: is_topologically_ergodic(sys),
    }
}
