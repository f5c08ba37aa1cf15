use crate::error::{Error, Result};
use crate::io::Numbering;
use crate::numbering::{
    inv_unchecked, BranchNumbering, EdgeNumbering, ExponentVector, Kind, Prime,
};
use crate::semigraph::{Branch, MarkedSemiGraph};

use super::EnumerationQuery;

/// The constraint system for one query: per-edge domains and the three
/// branches at each vertex.
pub(crate) struct Model {
    pub p: Prime,
    pub kind: Kind,
    /// Allowed variable values per edge, ascending.
    pub domains: Vec<Vec<u32>>,
    pub vertex_branches: Vec<[Branch; 3]>,
    pub self_loop: Vec<bool>,
    pub marking: Vec<Branch>,
}

impl Model {
    pub fn new(m: &MarkedSemiGraph, q: &EnumerationQuery) -> Result<Self> {
        m.graph_type()?;
        let g = m.graph();
        let p = q.p.get();
        let r = m.marking().len();
        if let Some(c) = &q.constraint {
            if c.len() != r {
                return Err(Error::ConstraintArity {
                    expected: r,
                    got: c.len(),
                });
            }
            if let Some(&x) = c.entries().iter().find(|&&x| x >= p) {
                return Err(Error::OutOfRange { value: x, p });
            }
        }

        let full: Vec<u32> = match q.kind {
            Kind::Strict => (1..p).collect(),
            // Any value above p - 2 breaks the sum bound at its vertex.
            Kind::Balanced => (0..=p - 2).collect(),
        };
        let mut domains = vec![full; g.edges().len()];
        if let Some(c) = &q.constraint {
            for (&b, &want) in m.marking().iter().zip(c.entries()) {
                let x = match q.kind {
                    Kind::Strict if b.slot == 0 => want,
                    Kind::Strict => inv_unchecked(p, want),
                    Kind::Balanced => want,
                };
                domains[b.edge].retain(|&d| d == x);
            }
        }

        let vertex_branches = (0..g.vertices().len())
            .map(|v| {
                let bs = g.branches_at(v);
                [bs[0], bs[1], bs[2]]
            })
            .collect();
        Ok(Model {
            p: q.p,
            kind: q.kind,
            domains,
            vertex_branches,
            self_loop: g.edges().iter().map(|e| e.is_self_loop()).collect(),
            marking: m.marking().to_vec(),
        })
    }

    pub fn edge_count(&self) -> usize {
        self.domains.len()
    }

    /// Value of branch `b` when its edge variable is `x`.
    #[inline]
    pub fn branch_value(&self, b: Branch, x: u32) -> u32 {
        match (self.kind, b.slot) {
            (Kind::Strict, 1) => inv_unchecked(self.p.get(), x),
            _ => x,
        }
    }

    /// Whether a full vertex triple satisfies the vertex condition.
    #[inline]
    pub fn vertex_ok(&self, t: [u32; 3]) -> bool {
        match self.kind {
            Kind::Strict => t[0] + t[1] + t[2] == self.p.get() + 1,
            Kind::Balanced => crate::numbering::satisfies_star(self.p.get(), t),
        }
    }

    pub fn exponent(&self, xs: &[u32]) -> ExponentVector {
        ExponentVector(
            self.marking
                .iter()
                .map(|&b| self.branch_value(b, xs[b.edge]))
                .collect(),
        )
    }

    pub fn numbering(&self, xs: &[u32]) -> Numbering {
        match self.kind {
            Kind::Strict => Numbering::Strict(BranchNumbering::from_raw(
                self.p,
                xs.iter()
                    .flat_map(|&x| [x, inv_unchecked(self.p.get(), x)])
                    .collect(),
            )),
            Kind::Balanced => Numbering::Balanced(EdgeNumbering::from_raw(self.p, xs.to_vec())),
        }
    }
}
