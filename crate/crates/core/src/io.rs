//! JSON file formats for graphs and numberings.
//!
//! Graph files look like
//!
//! ```json
//! {"vertices":["v"],"edges":[{"id":"loop","ends":["v","v"]},{"id":"l1","ends":["v",null]}],"marking":["l1"]}
//! ```
//!
//! where `null` is the open point and `marking` lists leg ids in label order.
//! Numbering files carry `p`, `kind` and either `edge_values` (keyed by edge
//! id) or `branch_values` (keyed by `"<edge id>.<slot>"`). Writers emit keys
//! in a fixed order and maps in edge declaration order, so a written file
//! re-serializes byte for byte.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numbering::{BranchNumbering, EdgeNumbering, ExponentVector, Kind, Prime};
use crate::semigraph::{Branch, MarkedSemiGraph, SemiGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub ends: [Option<String>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub marking: Vec<String>,
}

impl GraphFile {
    pub fn from_graph(m: &MarkedSemiGraph) -> Self {
        let g = m.graph();
        let name = |inc: crate::semigraph::Incidence| inc.vertex().map(|v| g.vertices()[v].clone());
        GraphFile {
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    ends: [name(e.ends[0]), name(e.ends[1])],
                })
                .collect(),
            marking: m
                .marking()
                .iter()
                .map(|b| g.edges()[b.edge].id.clone())
                .collect(),
        }
    }

    pub fn into_graph(self) -> Result<MarkedSemiGraph> {
        let graph = SemiGraph::new(
            self.vertices,
            self.edges.into_iter().map(|e| (e.id, e.ends)),
        )?;
        Ok(MarkedSemiGraph::new(graph, &self.marking)?)
    }
}

pub fn parse_graph(text: &str) -> Result<MarkedSemiGraph> {
    let file: GraphFile = serde_json::from_str(text)?;
    file.into_graph()
}

/// Canonical single-line JSON for a marked graph.
pub fn write_graph(m: &MarkedSemiGraph) -> String {
    serde_json::to_string(&GraphFile::from_graph(m)).expect("graph serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumberingFile {
    pub p: u32,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_values: Option<IndexMap<String, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_values: Option<IndexMap<String, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<ExponentVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<ExponentVector>,
}

/// A numbering of either family, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Numbering {
    Balanced(EdgeNumbering),
    Strict(BranchNumbering),
}

impl Numbering {
    pub fn kind(&self) -> Kind {
        match self {
            Numbering::Balanced(_) => Kind::Balanced,
            Numbering::Strict(_) => Kind::Strict,
        }
    }
}

fn branch_key(m: &MarkedSemiGraph, b: Branch) -> String {
    format!("{}.{}", m.graph().edges()[b.edge].id, b.slot)
}

impl NumberingFile {
    pub fn from_edges(m: &MarkedSemiGraph, a: &EdgeNumbering) -> Self {
        NumberingFile {
            p: a.p().get(),
            kind: Kind::Balanced,
            edge_values: Some(
                m.graph()
                    .edges()
                    .iter()
                    .zip(a.values())
                    .map(|(e, &x)| (e.id.clone(), x))
                    .collect(),
            ),
            branch_values: None,
            radii: None,
            exponent: None,
        }
    }

    pub fn from_branches(m: &MarkedSemiGraph, a: &BranchNumbering) -> Self {
        let branch_values = (0..m.graph().edges().len())
            .flat_map(|e| [Branch::new(e, 0), Branch::new(e, 1)])
            .map(|b| (branch_key(m, b), a.value(b)))
            .collect();
        NumberingFile {
            p: a.p().get(),
            kind: Kind::Strict,
            edge_values: None,
            branch_values: Some(branch_values),
            radii: None,
            exponent: None,
        }
    }

    pub fn from_numbering(m: &MarkedSemiGraph, n: &Numbering) -> Self {
        match n {
            Numbering::Balanced(a) => Self::from_edges(m, a),
            Numbering::Strict(a) => Self::from_branches(m, a),
        }
    }

    /// Resolves ids against `m`. Every edge (or branch) must appear exactly
    /// once; the strict kind only checks the involution, not strictness.
    pub fn to_numbering(&self, m: &MarkedSemiGraph) -> Result<Numbering> {
        let p = Prime::new(self.p)?;
        let g = m.graph();
        match self.kind {
            Kind::Balanced => {
                let map = self
                    .edge_values
                    .as_ref()
                    .ok_or_else(|| Error::Parse("balanced numbering needs `edge_values`".into()))?;
                if self.branch_values.is_some() {
                    return Err(Error::Parse(
                        "balanced numbering cannot carry `branch_values`".into(),
                    ));
                }
                let mut values = vec![None; g.edges().len()];
                for (id, &x) in map {
                    let e = g
                        .edge_index(id)
                        .ok_or_else(|| Error::NumberingShape(format!("unknown edge `{id}`")))?;
                    values[e] = Some(x);
                }
                let values = collect_total(values, |i| g.edges()[i].id.clone())?;
                Ok(Numbering::Balanced(EdgeNumbering::new(m, p, values)?))
            }
            Kind::Strict => {
                let map = self
                    .branch_values
                    .as_ref()
                    .ok_or_else(|| Error::Parse("strict numbering needs `branch_values`".into()))?;
                if self.edge_values.is_some() {
                    return Err(Error::Parse(
                        "strict numbering cannot carry `edge_values`".into(),
                    ));
                }
                let mut values = vec![None; 2 * g.edges().len()];
                for (key, &x) in map {
                    let (id, slot) = key
                        .rsplit_once('.')
                        .and_then(|(id, s)| Some((id, s.parse::<u8>().ok().filter(|&s| s < 2)?)))
                        .ok_or_else(|| {
                            Error::Parse(format!("branch key `{key}` is not `<edge>.<0|1>`"))
                        })?;
                    let e = g
                        .edge_index(id)
                        .ok_or_else(|| Error::NumberingShape(format!("unknown edge `{id}`")))?;
                    values[2 * e + slot as usize] = Some(x);
                }
                let values =
                    collect_total(values, |i| branch_key(m, Branch::new(i / 2, (i % 2) as u8)))?;
                Ok(Numbering::Strict(BranchNumbering::new(m, p, values)?))
            }
        }
    }
}

fn collect_total(values: Vec<Option<u32>>, name: impl Fn(usize) -> String) -> Result<Vec<u32>> {
    values
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| Error::NumberingShape(format!("no value for `{}`", name(i)))))
        .collect()
}

pub fn parse_numbering(text: &str) -> Result<NumberingFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_numbering(file: &NumberingFile) -> String {
    serde_json::to_string(file).expect("numbering serializes")
}
