use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::numbering::{ExponentVector, Kind};
use crate::semigraph::Branch;

use super::model::Model;

enum Examine {
    Infeasible,
    Forced(usize, u32),
    Open,
}

/// Depth-first search over edge variables in declaration order, values
/// ascending, with forced values propagated before each branching step.
#[derive(Clone)]
pub(crate) struct Search<'a> {
    model: &'a Model,
    assign: Vec<Option<u32>>,
    trail: Vec<usize>,
}

impl<'a> Search<'a> {
    pub fn new(model: &'a Model) -> Self {
        Search {
            model,
            assign: vec![None; model.edge_count()],
            trail: Vec::new(),
        }
    }

    pub fn run(&mut self, visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>) -> ControlFlow<()> {
        self.descend(visit)
    }

    /// Counts solutions, splitting the first branching level across the
    /// rayon pool.
    pub fn count_split(
        mut self,
        by_exponent: bool,
    ) -> (u64, Option<BTreeMap<ExponentVector, u64>>) {
        let model = self.model;
        let count_from = |mut s: Search<'a>| {
            let mut total = 0u64;
            let mut tally = BTreeMap::new();
            let _ = s.descend(&mut |xs| {
                total += 1;
                if by_exponent {
                    *tally.entry(model.exponent(xs)).or_insert(0) += 1;
                }
                ControlFlow::Continue(())
            });
            (total, tally)
        };

        let (total, tally) = match self.root_split() {
            None => (0, BTreeMap::new()),
            Some(None) => count_from(self),
            Some(Some(e)) => model.domains[e]
                .par_iter()
                .map(|&x| {
                    let mut s = self.clone();
                    s.assign[e] = Some(x);
                    count_from(s)
                })
                .reduce(
                    || (0, BTreeMap::new()),
                    |(ta, mut ma), (tb, mb)| {
                        for (k, v) in mb {
                            *ma.entry(k).or_insert(0) += v;
                        }
                        (ta + tb, ma)
                    },
                ),
        };
        (total, by_exponent.then_some(tally))
    }

    /// All solutions, grouped by the value of the first branching variable in
    /// ascending order.
    pub fn collect_split(mut self) -> Vec<Vec<Vec<u32>>> {
        let collect_from = |mut s: Search<'a>| {
            let mut out = Vec::new();
            let _ = s.descend(&mut |xs| {
                out.push(xs.to_vec());
                ControlFlow::Continue(())
            });
            out
        };
        match self.root_split() {
            None => Vec::new(),
            Some(None) => vec![collect_from(self)],
            Some(Some(e)) => self.model.domains[e]
                .par_iter()
                .map(|&x| {
                    let mut s = self.clone();
                    s.assign[e] = Some(x);
                    collect_from(s)
                })
                .collect(),
        }
    }

    /// Propagates at the root. `None` if infeasible, otherwise the first
    /// variable left to branch on (`Some(None)` when everything is forced).
    fn root_split(&mut self) -> Option<Option<usize>> {
        if !self.propagate() {
            return None;
        }
        Some(self.next_unassigned())
    }

    fn descend(&mut self, visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>) -> ControlFlow<()> {
        let mark = self.trail.len();
        let flow = if self.propagate() {
            self.branch(visit)
        } else {
            ControlFlow::Continue(())
        };
        for e in self.trail.drain(mark..) {
            self.assign[e] = None;
        }
        flow
    }

    fn branch(&mut self, visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>) -> ControlFlow<()> {
        let Some(e) = self.next_unassigned() else {
            let xs: Vec<u32> = self.assign.iter().map(|x| x.expect("complete")).collect();
            return visit(&xs);
        };
        let model = self.model;
        for &x in &model.domains[e] {
            self.assign[e] = Some(x);
            let flow = self.descend(visit);
            self.assign[e] = None;
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn next_unassigned(&self) -> Option<usize> {
        self.assign.iter().position(Option::is_none)
    }

    fn set(&mut self, e: usize, x: u32) {
        self.assign[e] = Some(x);
        self.trail.push(e);
    }

    /// Assigns singleton domains and forced vertex values until a fixpoint.
    /// Returns false on a contradiction; assignments made so far stay on the
    /// trail for the caller to undo.
    fn propagate(&mut self) -> bool {
        let model = self.model;
        loop {
            let mut changed = false;
            for e in 0..model.edge_count() {
                if self.assign[e].is_none() {
                    match model.domains[e].as_slice() {
                        [] => return false,
                        [x] => {
                            self.set(e, *x);
                            changed = true;
                        }
                        _ => {}
                    }
                }
            }
            for v in 0..model.vertex_branches.len() {
                match self.examine(v) {
                    Examine::Infeasible => return false,
                    Examine::Forced(e, x) => {
                        self.set(e, x);
                        changed = true;
                    }
                    Examine::Open => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn in_domain(&self, e: usize, x: u32) -> bool {
        self.model.domains[e].binary_search(&x).is_ok()
    }

    fn examine(&self, v: usize) -> Examine {
        match self.model.kind {
            Kind::Strict => self.examine_strict(v),
            Kind::Balanced => self.examine_balanced(v),
        }
    }

    fn examine_strict(&self, v: usize) -> Examine {
        let model = self.model;
        let p = model.p.get();
        let mut sum = 0;
        let mut unknown: Option<Branch> = None;
        let mut k = 0;
        for &b in &model.vertex_branches[v] {
            match self.assign[b.edge] {
                Some(x) => sum += model.branch_value(b, x),
                // An unassigned self-loop contributes x + (p - x) = p.
                None if model.self_loop[b.edge] => {
                    if b.slot == 0 {
                        sum += p;
                    }
                }
                None => {
                    k += 1;
                    unknown = Some(b);
                }
            }
        }
        if sum + k > p + 1 || sum + k * (p - 1) < p + 1 {
            return Examine::Infeasible;
        }
        match (k, unknown) {
            (1, Some(b)) => {
                let needed = p + 1 - sum;
                let x = model.branch_value(b, needed);
                if self.in_domain(b.edge, x) {
                    Examine::Forced(b.edge, x)
                } else {
                    Examine::Infeasible
                }
            }
            _ => Examine::Open,
        }
    }

    fn examine_balanced(&self, v: usize) -> Examine {
        let model = self.model;
        let p = model.p.get();
        let mut known = [0u32; 3];
        let mut n_known = 0;
        let mut single: Option<usize> = None;
        let mut n_single = 0;
        let mut looped: Option<usize> = None;
        for &b in &model.vertex_branches[v] {
            match self.assign[b.edge] {
                Some(x) => {
                    known[n_known] = x;
                    n_known += 1;
                }
                None if model.self_loop[b.edge] => looped = Some(b.edge),
                None => {
                    n_single += 1;
                    single = Some(b.edge);
                }
            }
        }
        let sum: u32 = known[..n_known].iter().sum();
        if sum + 2 > p {
            return Examine::Infeasible;
        }
        let (edge, lo, hi) = match (n_known, n_single, looped, single) {
            (3, _, _, _) => {
                return if model.vertex_ok(known) {
                    Examine::Open
                } else {
                    Examine::Infeasible
                };
            }
            (2, 1, None, Some(e)) => {
                let (x, y) = (known[0], known[1]);
                (e, x.abs_diff(y), (x + y).min(p - 2 - x - y))
            }
            // Loop value z appears twice next to w: w <= 2z and 2z + w <= p - 2.
            (1, 0, Some(e), _) => {
                let w = known[0];
                (e, w.div_ceil(2), (p - 2 - w) / 2)
            }
            _ => return Examine::Open,
        };
        let dom = &model.domains[edge];
        let start = dom.partition_point(|&d| d < lo);
        let end = dom.partition_point(|&d| d <= hi);
        match end.saturating_sub(start) {
            0 => Examine::Infeasible,
            1 => Examine::Forced(edge, dom[start]),
            _ => Examine::Open,
        }
    }
}
