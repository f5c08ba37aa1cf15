//! Enumeration and counting of numberings.
//!
//! Both engines use one variable per edge. For strict numberings the variable
//! is the value on the slot-0 branch (slot 1 carries its involution); for
//! balanced numberings it is the edge value. The backtracking engine yields
//! solutions in lexicographic order of the edge variables in declaration
//! order. The contraction engine never materializes solutions; it multiplies
//! per-vertex indicator tables and sums variables out one at a time.

mod backtrack;
mod contract;
mod model;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::Numbering;
use crate::numbering::{ExponentVector, Kind, Prime};
use crate::semigraph::MarkedSemiGraph;

pub use contract::DEFAULT_TABLE_BOUND;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Enumerate,
    Count,
}

/// What to search for. The constraint is read as radii for balanced
/// numberings and as an exponent for strict ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationQuery {
    pub p: Prime,
    pub kind: Kind,
    pub constraint: Option<ExponentVector>,
    pub limit: Option<usize>,
    pub mode: Mode,
}

impl EnumerationQuery {
    pub fn new(p: Prime, kind: Kind) -> Self {
        EnumerationQuery {
            p,
            kind,
            constraint: None,
            limit: None,
            mode: Mode::Enumerate,
        }
    }

    pub fn strict(p: Prime) -> Self {
        Self::new(p, Kind::Strict)
    }

    pub fn balanced(p: Prime) -> Self {
        Self::new(p, Kind::Balanced)
    }

    pub fn with_constraint(mut self, c: ExponentVector) -> Self {
        self.constraint = Some(c);
        self
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn counting(mut self) -> Self {
        self.mode = Mode::Count;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Backtracking,
    Contraction,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Backtracking => "backtracking",
            Method::Contraction => "contraction",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusCell {
    pub exponent: ExponentVector,
    pub count: u64,
}

/// Number of solutions, optionally split by the values on the marked legs.
/// Cells with zero count are omitted from `by_exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub by_exponent: Option<Vec<CensusCell>>,
    pub method: Method,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CensusReport {
    fn from_tally(
        method: Method,
        tally: Option<BTreeMap<ExponentVector, u64>>,
        total: u64,
    ) -> Self {
        CensusReport {
            total,
            by_exponent: tally.map(|t| {
                t.into_iter()
                    .filter(|&(_, c)| c > 0)
                    .map(|(exponent, count)| CensusCell { exponent, count })
                    .collect()
            }),
            method,
            warnings: Vec::new(),
        }
    }

    /// Count of the cell at `e`, zero if absent. `None` without a breakdown.
    pub fn cell(&self, e: &ExponentVector) -> Option<u64> {
        self.by_exponent.as_ref().map(|cells| {
            cells
                .iter()
                .find(|c| &c.exponent == e)
                .map_or(0, |c| c.count)
        })
    }
}

/// Calls `visit` on every solution in deterministic order until it breaks or
/// the query's limit is reached.
pub fn for_each(
    m: &MarkedSemiGraph,
    q: &EnumerationQuery,
    mut visit: impl FnMut(Numbering) -> ControlFlow<()>,
) -> Result<()> {
    let model = model::Model::new(m, q)?;
    let mut remaining = q.limit;
    if remaining == Some(0) {
        return Ok(());
    }
    let _ = backtrack::Search::new(&model).run(&mut |xs| {
        let flow = visit(model.numbering(xs));
        if let Some(n) = remaining.as_mut() {
            *n -= 1;
            if *n == 0 {
                return ControlFlow::Break(());
            }
        }
        flow
    });
    Ok(())
}

/// Every solution, in deterministic order, truncated to the query's limit.
pub fn enumerate(m: &MarkedSemiGraph, q: &EnumerationQuery) -> Result<Vec<Numbering>> {
    let mut out = Vec::new();
    for_each(m, q, |n| {
        out.push(n);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Same output as [`enumerate`], with the first branching level split across
/// the rayon pool and merged in subtree order.
pub fn enumerate_parallel(m: &MarkedSemiGraph, q: &EnumerationQuery) -> Result<Vec<Numbering>> {
    let model = model::Model::new(m, q)?;
    let chunks = backtrack::Search::new(&model).collect_split();
    let mut out: Vec<Numbering> = chunks
        .into_iter()
        .flatten()
        .map(|xs| model.numbering(&xs))
        .collect();
    if let Some(limit) = q.limit {
        out.truncate(limit);
    }
    Ok(out)
}

/// Counts solutions by backtracking. With `by_exponent`, also tallies the
/// values on the marked legs.
pub fn count(m: &MarkedSemiGraph, q: &EnumerationQuery, by_exponent: bool) -> Result<CensusReport> {
    let model = model::Model::new(m, q)?;
    let (total, tally) = backtrack::Search::new(&model).count_split(by_exponent);
    Ok(CensusReport::from_tally(Method::Backtracking, tally, total))
}

/// Counts solutions by eliminating edge variables from the product of
/// per-vertex indicator tables.
pub fn count_by_contraction(
    m: &MarkedSemiGraph,
    q: &EnumerationQuery,
    by_exponent: bool,
) -> Result<CensusReport> {
    count_by_contraction_bounded(m, q, by_exponent, DEFAULT_TABLE_BOUND)
}

/// As [`count_by_contraction`], warning when an intermediate table has more
/// than `table_bound` entries.
pub fn count_by_contraction_bounded(
    m: &MarkedSemiGraph,
    q: &EnumerationQuery,
    by_exponent: bool,
    table_bound: usize,
) -> Result<CensusReport> {
    let model = model::Model::new(m, q)?;
    let outcome = contract::contract(&model, by_exponent, table_bound);
    let mut report = CensusReport::from_tally(Method::Contraction, outcome.tally, outcome.total);
    report.warnings = outcome.warnings;
    Ok(report)
}
