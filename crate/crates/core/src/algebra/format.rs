//! Text formats: algebra documents, map files, block lists, graph files.
//!
//! Algebra documents are JSON objects:
//!
//! ```text
//! algebra   := { "name": string, "size": int, "operations": [op, ..], "point"?: int }
//! op        := { "name": string, "arity": int, "table": [int, ..] }
//! ```
//!
//! Graph files bundle two algebras and three maps:
//!
//! ```text
//! graph     := { "x1": algebra, "x0": algebra, "d0": [int, ..], "d1": [int, ..], "s0": [int, ..] }
//! ```
//!
//! Tables are row-major. Map files are `map: [i0, i1, ..]`; pair files are
//! `pairs: [[x, z], ..]`; block lists are `[[0,2],[1,3]]`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FiniteAlgebra, Homomorphism, Operation, ReflexiveGraph};
use crate::congruence::Partition;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationDoc {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub name: String,
    pub size: usize,
    pub operations: Vec<OperationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<usize>,
}

impl AlgebraDoc {
    pub fn from_algebra(a: &FiniteAlgebra) -> Self {
        AlgebraDoc {
            name: a.name().to_string(),
            size: a.size(),
            operations: a
                .operations()
                .iter()
                .map(|o| OperationDoc { name: o.name.clone(), arity: o.arity, table: o.table.clone() })
                .collect(),
            point: explicit_point(a),
        }
    }

    pub fn into_algebra(self) -> Result<FiniteAlgebra> {
        let ops = self.operations.into_iter().map(|o| Operation::new(o.name, o.arity, o.table)).collect();
        FiniteAlgebra::new(self.name, self.size, ops, self.point)
    }
}

/// The point is written out only when a constant named `0` would not
/// recover it.
fn explicit_point(a: &FiniteAlgebra) -> Option<usize> {
    let zero = a.op("0").filter(|o| o.arity == 0).map(|o| o.table[0]);
    match (a.point(), zero) {
        (Some(p), Some(z)) if p == z => None,
        (p, _) => p,
    }
}

pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let doc: AlgebraDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    doc.into_algebra()
}

/// Pretty-printed JSON; `parse_algebra` inverts it.
pub fn serialize_algebra(a: &FiniteAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraDoc::from_algebra(a)).expect("serializable")
}

fn strip_key<'a>(text: &'a str, key: &str) -> Result<&'a str> {
    let t = text.trim();
    let rest = t
        .strip_prefix(key)
        .and_then(|r| r.trim_start().strip_prefix(':'))
        .ok_or_else(|| Error::Malformed(format!("expected `{key}: [...]`")))?;
    Ok(rest.trim())
}

/// Parses `map: [i0, i1, ..]`.
pub fn parse_map(text: &str) -> Result<Vec<usize>> {
    let body = strip_key(text, "map")?;
    serde_json::from_str(body).map_err(|e| Error::Malformed(format!("map: {e}")))
}

/// Parses `pairs: [[x, z], ..]`.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    let body = strip_key(text, "pairs")?;
    let raw: Vec<[usize; 2]> = serde_json::from_str(body).map_err(|e| Error::Malformed(format!("pairs: {e}")))?;
    Ok(raw.into_iter().map(|[a, b]| (a, b)).collect())
}

/// Parses a block list such as `[[0,2],[1,3]]`, whitespace-insensitive.
/// Elements not mentioned become singletons.
pub fn parse_blocks(text: &str, n: usize) -> Result<Partition> {
    let blocks: Vec<Vec<usize>> =
        serde_json::from_str(text.trim()).map_err(|e| Error::Malformed(format!("blocks: {e}")))?;
    Partition::from_blocks(n, &blocks)
}

/// A reflexive graph file: two algebra objects and three maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub x1: AlgebraDoc,
    pub x0: AlgebraDoc,
    pub d0: Vec<usize>,
    pub d1: Vec<usize>,
    pub s0: Vec<usize>,
}

pub fn parse_graph(text: &str) -> Result<ReflexiveGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let x1 = Arc::new(doc.x1.into_algebra()?);
    let x0 = Arc::new(doc.x0.into_algebra()?);
    let d0 = Homomorphism::new(x1.clone(), x0.clone(), doc.d0)?;
    let d1 = Homomorphism::new(x1.clone(), x0.clone(), doc.d1)?;
    let s0 = Homomorphism::new(x0, x1, doc.s0)?;
    ReflexiveGraph::new(d0, d1, s0)
}

pub fn serialize_graph(g: &ReflexiveGraph) -> String {
    let doc = GraphDoc {
        x1: AlgebraDoc::from_algebra(&g.x1),
        x0: AlgebraDoc::from_algebra(&g.x0),
        d0: g.d0.map().to_vec(),
        d1: g.d1.map().to_vec(),
        s0: g.s0.map().to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}
