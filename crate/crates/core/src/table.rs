//! User-supplied Ramsey values consumed by constructions and bound formulas.
//!
//! Keys are plain strings built from graph6 codes:
//! `R(a,b)` (symmetric, codes sorted), `R(M_i(h),h)` for a decomposition
//! family against its base graph, `R2(C(h))`, and `R2(h)`, `R3(h)`, `BR2(h)`,
//! `BR3(h)` for single-graph quantities.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::SimpleGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub value: u64,
    #[serde(default)]
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownValuesTable {
    #[serde(default)]
    pub entries: BTreeMap<String, TableEntry>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table entry {key} has value {value}; Ramsey values are at least 2")]
    ValueTooSmall { key: String, value: u64 },
    #[error("missing table entry {0}")]
    Missing(String),
    #[error("malformed table: {0}")]
    Malformed(String),
}

pub fn key_pair(a: &SimpleGraph, b: &SimpleGraph) -> String {
    let (x, y) = (a.to_graph6(), b.to_graph6());
    if x <= y {
        format!("R({x},{y})")
    } else {
        format!("R({y},{x})")
    }
}

/// `R(M_i(h), h)`: a monochromatic member of the family in one color or `h`
/// in the other.
pub fn key_family(h: &SimpleGraph, index: usize) -> String {
    let g = h.to_graph6();
    format!("R(M_{index}({g}),{g})")
}

pub fn key_connected_supergraphs(h: &SimpleGraph) -> String {
    format!("R2(C({}))", h.to_graph6())
}

/// Single-graph quantities such as `R3`, `BR2`.
pub fn key_single(quantity: &str, h: &SimpleGraph) -> String {
    format!("{quantity}({})", h.to_graph6())
}

impl KnownValuesTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads `{"entries": {key: {"value": v, "note": ..}}}` or the short
    /// form `{key: v}`.
    pub fn from_json(text: &str) -> Result<Self, TableError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Full {
                entries: BTreeMap<String, TableEntry>,
            },
            Short(BTreeMap<String, u64>),
        }
        let raw: Raw = serde_json::from_str(text).map_err(|_| {
            TableError::Malformed("expected {\"entries\": {key: {\"value\": n}}} or {key: n}".into())
        })?;
        let table = match raw {
            Raw::Full { entries } => KnownValuesTable { entries },
            Raw::Short(map) => KnownValuesTable {
                entries: map.into_iter().map(|(k, value)| (k, TableEntry { value, note: String::new() })).collect(),
            },
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<(), TableError> {
        for (key, e) in &self.entries {
            if e.value < 2 {
                return Err(TableError::ValueTooSmall { key: key.clone(), value: e.value });
            }
        }
        Ok(())
    }

    pub fn insert(&mut self, key: impl Into<String>, value: u64, note: impl Into<String>) -> Result<(), TableError> {
        let key = key.into();
        if value < 2 {
            return Err(TableError::ValueTooSmall { key, value });
        }
        self.entries.insert(key, TableEntry { value, note: note.into() });
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.entries.get(key).map(|e| e.value)
    }

    /// `R(a, b)`; `R(K_2, G) = |V(G)|` is known without a table entry.
    pub fn pair(&self, a: &SimpleGraph, b: &SimpleGraph) -> Option<u64> {
        if let Some(v) = self.get(&key_pair(a, b)) {
            return Some(v);
        }
        let k2 = SimpleGraph::complete(2);
        if *a == k2 {
            return Some(b.order().max(2) as u64);
        }
        if *b == k2 {
            return Some(a.order().max(2) as u64);
        }
        None
    }

    /// `R_2(K_w)`, with `R_2(K_2) = 2` built in.
    pub fn clique_diagonal(&self, w: usize) -> Option<u64> {
        let kw = SimpleGraph::complete(w);
        self.pair(&kw, &kw)
    }

    pub fn family(&self, h: &SimpleGraph, index: usize) -> Option<u64> {
        self.get(&key_family(h, index))
    }
}
