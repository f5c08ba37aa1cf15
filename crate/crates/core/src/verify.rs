//! Exhaustive checks of the genus bound, the genus-one classification, the
//! tripod dictionary and the Miura map on concrete graphs.
//!
//! Every failing report carries a [`Witness`] that [`replay`] can re-check
//! against the predicates in [`crate::numbering`].

use std::collections::{BTreeSet, VecDeque};
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builders;
use crate::error::{Error, Result};
use crate::io::{Numbering, NumberingFile};
use crate::miura::{
    check_pp004, expected_radii, miura_transform, mu_unchecked, TripodCounterexample,
};
use crate::numbering::{
    exponent_of, is_balanced, is_strict, satisfies_star, BranchNumbering, ExponentVector, Prime,
};
use crate::search::{self, EnumerationQuery, Method};
use crate::semigraph::{Branch, Incidence, MarkedSemiGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// The property a witness numbering breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// The numbering should not be strict but is.
    UnexpectedStrict,
    /// The numbering should be strict but is not.
    NotStrict,
    /// The two branches of some edge have different Miura values.
    EdgeInconsistent,
    /// The Miura image is not balanced.
    ImageNotBalanced,
    /// The radii of the image differ from the image of the exponent.
    RadiiMismatch,
    /// The exponent is not all `p - 1`.
    WrongExponent,
    /// The numbering is not constant along the cycle with `[1, 1, p-1]` off it.
    LoopStructure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Numbering {
        numbering: NumberingFile,
        property: Property,
    },
    Triple(TripodCounterexample),
    Count {
        p: u32,
        method: Method,
        constraint: Option<ExponentVector>,
        count: u64,
        expected: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    pub expected: String,
    pub observed: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

impl TheoremReport {
    fn new(theorem: &'static str, p: Option<Prime>, expected: impl Into<String>) -> Self {
        TheoremReport {
            theorem,
            graph: None,
            p: p.map(Prime::get),
            expected: expected.into(),
            observed: String::new(),
            status: Status::Pass,
            witnesses: Vec::new(),
        }
    }

    pub fn on_graph(mut self, name: impl Into<String>) -> Self {
        self.graph = Some(name.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn fail(&mut self, w: Witness) {
        self.status = Status::Fail;
        self.witnesses.push(w);
    }

    fn not_applicable(mut self, why: impl Into<String>) -> Self {
        self.status = Status::NotApplicable;
        self.observed = why.into();
        self
    }

    fn finish(mut self, observed: impl Into<String>) -> Self {
        self.observed = observed.into();
        self
    }
}

fn strict_numberings(m: &MarkedSemiGraph, p: Prime) -> Result<Vec<BranchNumbering>> {
    let mut out = Vec::new();
    search::for_each(m, &EnumerationQuery::strict(p), |n| {
        if let Numbering::Strict(a) = n {
            out.push(a);
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

fn witness(m: &MarkedSemiGraph, a: &BranchNumbering, property: Property) -> Witness {
    Witness::Numbering {
        numbering: NumberingFile::from_branches(m, a),
        property,
    }
}

fn counts_by_both(m: &MarkedSemiGraph, q: &EnumerationQuery) -> Result<[(Method, u64); 2]> {
    Ok([
        (Method::Backtracking, search::count(m, q, false)?.total),
        (
            Method::Contraction,
            search::count_by_contraction(m, q, false)?.total,
        ),
    ])
}

/// The residue of `-1` on every marked leg.
pub fn minus_one_exponent(m: &MarkedSemiGraph, p: Prime) -> ExponentVector {
    ExponentVector(vec![p.get() - 1; m.marking().len()])
}

/// Genus bound and genus-one count: no strict numbering when `g >= 2`;
/// exactly `p - 1` of them when `g = 1`, all with exponent `(-1, ..., -1)`.
pub fn verify_p048(m: &MarkedSemiGraph, p: Prime) -> Result<TheoremReport> {
    let ty = m.graph_type()?;
    let unconstrained = EnumerationQuery::strict(p);
    match ty.g {
        0 => Ok(
            TheoremReport::new("p048", Some(p), "g <= 1 needed for applicability").not_applicable(
                "g = 0: the bound holds vacuously and the genus-one count does not apply",
            ),
        ),
        1 => {
            let target = p.get() as u64 - 1;
            let e = minus_one_exponent(m, p);
            let mut report = TheoremReport::new(
                "p048",
                Some(p),
                format!("{target} strict numberings, all of exponent {e}"),
            );
            let constrained = unconstrained.clone().with_constraint(e.clone());
            for q in [&unconstrained, &constrained] {
                for (method, count) in counts_by_both(m, q)? {
                    if count != target {
                        report.fail(Witness::Count {
                            p: p.get(),
                            method,
                            constraint: q.constraint.clone(),
                            count,
                            expected: target,
                        });
                    }
                }
            }
            let sols = strict_numberings(m, p)?;
            for a in &sols {
                if exponent_of(m, a) != e {
                    report.fail(witness(m, a, Property::WrongExponent));
                }
            }
            let observed = format!("{} strict numberings", sols.len());
            Ok(report.finish(observed))
        }
        g => {
            let mut report = TheoremReport::new("p048", Some(p), "no strict numbering");
            for (method, count) in counts_by_both(m, &unconstrained)? {
                if count != 0 {
                    report.fail(Witness::Count {
                        p: p.get(),
                        method,
                        constraint: None,
                        count,
                        expected: 0,
                    });
                }
            }
            if let Some(a) = strict_numberings(m, p)?.first() {
                report.fail(witness(m, a, Property::UnexpectedStrict));
            }
            let observed = if report.passed() {
                format!("g = {g}: 0 strict numberings by both methods")
            } else {
                format!("g = {g}: strict numberings found")
            };
            Ok(report.finish(observed))
        }
    }
}

/// The numbering with value `a` along `cycle` (partners `p - a`) and, on every
/// other edge, `1` on the branch nearer the cycle and `p - 1` on the other.
pub fn genus_one_numbering(
    m: &MarkedSemiGraph,
    p: Prime,
    cycle: &[Branch],
    a: u32,
) -> BranchNumbering {
    let g = m.graph();
    let n = g.vertices().len();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for b in cycle {
        if let Incidence::Vertex(v) = g.incidence(*b) {
            if dist[v] == usize::MAX {
                dist[v] = 0;
                queue.push_back(v);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        for b in g.branches_at(v) {
            if let Incidence::Vertex(w) = g.incidence(b.partner()) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    let on_cycle: BTreeSet<usize> = cycle.iter().map(|b| b.edge).collect();
    let mut values = vec![0u32; 2 * g.edges().len()];
    for b in cycle {
        values[2 * b.edge + b.slot as usize] = a;
        values[2 * b.edge + 1 - b.slot as usize] = p.get() - a;
    }
    let depth = |inc: Incidence| inc.vertex().map_or(usize::MAX, |v| dist[v]);
    for (e, edge) in g.edges().iter().enumerate() {
        if on_cycle.contains(&e) {
            continue;
        }
        let near = if depth(edge.ends[0]) <= depth(edge.ends[1]) {
            0
        } else {
            1
        };
        values[2 * e + near] = 1;
        values[2 * e + 1 - near] = p.get() - 1;
    }
    BranchNumbering::from_raw(p, values)
}

/// Structure of genus-one solutions: constant value `a` along the cycle with
/// partners `p - a`, multiset `[1, 1, p-1]` at every vertex off the cycle,
/// and `a` ranging bijectively over `1..p-1`.
pub fn verify_p048_structure(m: &MarkedSemiGraph, p: Prime) -> Result<TheoremReport> {
    let ty = m.graph_type()?;
    let report = TheoremReport::new(
        "p048_structure",
        Some(p),
        "each solution is constant along the cycle, [1, 1, p-1] off it, one per a in 1..p-1",
    );
    if ty.g != 1 {
        return Ok(report.not_applicable(format!("g = {}, structure check needs g = 1", ty.g)));
    }
    let mut report = report;
    let g = m.graph();
    let cycle = m.reduced_loop(0).expect("genus one has a cycle").branches;
    let cycle_vertices: BTreeSet<usize> = cycle
        .iter()
        .filter_map(|b| g.incidence(*b).vertex())
        .collect();
    let pv = p.get();

    let sols = strict_numberings(m, p)?;
    let mut seen_a = Vec::with_capacity(sols.len());
    for sol in &sols {
        let a = sol.value(cycle[0]);
        let along = cycle
            .iter()
            .all(|&b| sol.value(b) == a && sol.value(b.partner()) == pv - a);
        let off = (0..g.vertices().len())
            .filter(|v| !cycle_vertices.contains(v))
            .all(|v| {
                let mut t: Vec<u32> = g.branches_at(v).iter().map(|&b| sol.value(b)).collect();
                t.sort_unstable();
                t == [1, 1, pv - 1]
            });
        if !(along && off) || genus_one_numbering(m, p, &cycle, a) != *sol {
            report.fail(witness(m, sol, Property::LoopStructure));
        }
        seen_a.push(a);
    }
    seen_a.sort_unstable();
    let expected_a: Vec<u32> = (1..pv).collect();
    if seen_a != expected_a {
        report.fail(Witness::Count {
            p: pv,
            method: Method::Backtracking,
            constraint: None,
            count: sols.len() as u64,
            expected: pv as u64 - 1,
        });
    }
    // Conversely every a gives a strict numbering.
    for a in 1..pv {
        let built = genus_one_numbering(m, p, &cycle, a);
        if !is_strict(m, &built) {
            report.fail(witness(m, &built, Property::NotStrict));
        }
    }
    let cycle_len = cycle.len();
    Ok(report.finish(format!(
        "{} solutions; cycle of length {cycle_len}; loop values {:?}",
        sols.len(),
        seen_a
    )))
}

/// Miura map on every strict numbering of `m`: both branches of each edge
/// agree, the image is balanced, and its radii are the image of the exponent.
pub fn verify_miura(m: &MarkedSemiGraph, p: Prime) -> Result<TheoremReport> {
    m.graph_type()?;
    let mut report = TheoremReport::new(
        "miura",
        Some(p),
        "edge-consistent Miura values, balanced image, radii = image of exponent",
    );
    let sols = strict_numberings(m, p)?;
    for a in &sols {
        let consistent = (0..m.graph().edges().len()).all(|e| {
            mu_unchecked(p.get(), a.value(Branch::new(e, 0)))
                == mu_unchecked(p.get(), a.value(Branch::new(e, 1)))
        });
        if !consistent {
            report.fail(witness(m, a, Property::EdgeInconsistent));
            continue;
        }
        match miura_transform(m, a) {
            Ok(img) => {
                if !is_balanced(m, &img.numbering) {
                    report.fail(witness(m, a, Property::ImageNotBalanced));
                }
                if img.radii != expected_radii(m, a) {
                    report.fail(witness(m, a, Property::RadiiMismatch));
                }
            }
            Err(_) => report.fail(witness(m, a, Property::NotStrict)),
        }
    }
    let n = sols.len();
    Ok(report.finish(format!("{n} strict numberings checked")))
}

/// Tripod dictionary: a triple summing to `1 mod p` is strict exactly when
/// its Miura image satisfies the balanced conditions.
pub fn verify_pp004(p: Prime) -> TheoremReport {
    let r = check_pp004(p);
    let mut report = TheoremReport::new(
        "pp004",
        Some(p),
        "strict <=> Miura image balanced, 0 counterexamples",
    )
    .on_graph("tripod");
    for c in &r.counterexamples {
        report.fail(Witness::Triple(c.clone()));
    }
    report.finish(format!(
        "{} triples, {} strict, {} counterexamples",
        r.triples,
        r.strict,
        r.counterexamples.len()
    ))
}

/// The drawn strict 11-numbering on the (0, 5) tree.
pub fn figure_numbering() -> (MarkedSemiGraph, BranchNumbering) {
    let m = builders::figure_tree();
    let p = Prime::new(11).expect("11 is prime");
    let slot0: Vec<u32> = builders::FIGURE_BRANCH_PAIRS
        .iter()
        .map(|&(x, _)| x)
        .collect();
    let a =
        BranchNumbering::from_slot0(&m, p, &slot0).expect("figure values form a branch numbering");
    (m, a)
}

pub fn verify_figure() -> TheoremReport {
    let (m, a) = figure_numbering();
    let p = a.p();
    let mut report = TheoremReport::new(
        "figure",
        Some(p),
        "strict 11-numbering, vertex sums 12, image (0,4,4,1,3,2,1) balanced",
    )
    .on_graph("figure");
    let pairs_ok = builders::FIGURE_BRANCH_PAIRS
        .iter()
        .enumerate()
        .all(|(e, &(x, y))| {
            a.value(Branch::new(e, 0)) == x && a.value(Branch::new(e, 1)) == y && x + y == 11
        });
    let sums: Vec<u32> = (0..m.graph().vertices().len())
        .map(|v| m.graph().branches_at(v).iter().map(|&b| a.value(b)).sum())
        .collect();
    if !pairs_ok || !is_strict(&m, &a) || sums.iter().any(|&s| s != 12) {
        report.fail(witness(&m, &a, Property::NotStrict));
    }
    let image = match miura_transform(&m, &a) {
        Ok(img) => {
            if img.numbering.values() != [0, 4, 4, 1, 3, 2, 1] || !is_balanced(&m, &img.numbering) {
                report.fail(witness(&m, &a, Property::ImageNotBalanced));
            }
            img.numbering.values().to_vec()
        }
        Err(_) => {
            report.fail(witness(&m, &a, Property::NotStrict));
            Vec::new()
        }
    };
    report.finish(format!("vertex sums {sums:?}, image {image:?}"))
}

/// Re-checks a witness. `true` when the recorded failure reproduces.
pub fn replay(m: &MarkedSemiGraph, w: &Witness) -> Result<bool> {
    match w {
        Witness::Triple(c) => {
            let p = Prime::new(c.p)?;
            let strict =
                c.triple.iter().all(|&x| x != 0) && c.triple.iter().sum::<u32>() == p.get() + 1;
            let mu = c.triple.map(|x| mu_unchecked(p.get(), x % p.get()));
            Ok(strict != satisfies_star(p.get(), mu))
        }
        Witness::Count {
            p,
            method,
            constraint,
            count,
            expected,
        } => {
            let mut q = EnumerationQuery::strict(Prime::new(*p)?);
            q.constraint = constraint.clone();
            let recount = match method {
                Method::Backtracking => search::count(m, &q, false)?.total,
                Method::Contraction => search::count_by_contraction(m, &q, false)?.total,
            };
            Ok(recount == *count && recount != *expected)
        }
        Witness::Numbering {
            numbering,
            property,
        } => {
            let Numbering::Strict(a) = numbering.to_numbering(m)? else {
                return Err(Error::Parse("witness numbering must be strict".into()));
            };
            let p = a.p();
            Ok(match property {
                Property::UnexpectedStrict => is_strict(m, &a),
                Property::NotStrict => !is_strict(m, &a),
                Property::EdgeInconsistent => (0..m.graph().edges().len()).any(|e| {
                    mu_unchecked(p.get(), a.value(Branch::new(e, 0)))
                        != mu_unchecked(p.get(), a.value(Branch::new(e, 1)))
                }),
                Property::ImageNotBalanced => {
                    miura_transform(m, &a).is_ok_and(|img| !is_balanced(m, &img.numbering))
                }
                Property::RadiiMismatch => {
                    miura_transform(m, &a).is_ok_and(|img| img.radii != expected_radii(m, &a))
                }
                Property::WrongExponent => exponent_of(m, &a) != minus_one_exponent(m, p),
                Property::LoopStructure => {
                    let Some(cycle) = m.reduced_loop(0) else {
                        return Ok(false);
                    };
                    let a0 = a.value(cycle.branches[0]);
                    (1..p.get()).contains(&a0)
                        && genus_one_numbering(m, p, &cycle.branches, a0) != a
                }
            })
        }
    }
}

/// Runs every applicable verifier over the builder corpus for each prime,
/// plus the tripod dictionary per prime and the figure once. Cells run in
/// parallel; the output order is fixed.
pub fn verify_corpus(primes: &[Prime]) -> Result<Vec<TheoremReport>> {
    let corpus = builders::corpus();
    let cells: Vec<(usize, Prime)> = (0..corpus.len())
        .flat_map(|i| primes.iter().map(move |&p| (i, p)))
        .collect();
    let per_cell: Vec<Result<Vec<TheoremReport>>> = cells
        .par_iter()
        .map(|&(i, p)| {
            let (name, m) = &corpus[i];
            let mut out = Vec::new();
            for r in [
                verify_p048(m, p)?,
                verify_p048_structure(m, p)?,
                verify_miura(m, p)?,
            ] {
                if r.status != Status::NotApplicable {
                    out.push(r.on_graph(name.clone()));
                }
            }
            Ok(out)
        })
        .collect();
    let mut reports: Vec<TheoremReport> = primes.iter().map(|&p| verify_pp004(p)).collect();
    for cell in per_cell {
        reports.extend(cell?);
    }
    reports.push(verify_figure());
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn p048_examples() {
        let r = verify_p048(&theta(), p(7)).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = verify_p048(&cycle_with_legs(2), p(11)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.observed.starts_with("10 "));
        let r = verify_p048(&dumbbell(), p(5)).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = verify_p048(&tripod(), p(5)).unwrap();
        assert_eq!(r.status, Status::NotApplicable);
    }

    #[test]
    fn structure_examples() {
        for (m, q) in [
            (loop_with_leg(), 7),
            (cycle_with_legs(3), 5),
            (cycle_with_legs(1), 11),
            (lollipop(), 7),
        ] {
            let r = verify_p048_structure(&m, p(q)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert_eq!(
            verify_p048_structure(&theta(), p(5)).unwrap().status,
            Status::NotApplicable
        );
    }

    #[test]
    fn lollipop_off_cycle_vertex() {
        // the two-leg vertex is off the cycle and must carry [1, 1, p-1]
        let m = lollipop();
        let cycle = m.reduced_loop(0).unwrap().branches;
        let a = genus_one_numbering(&m, p(7), &cycle, 3);
        let w = m.graph().vertex_index("w").unwrap();
        let mut t: Vec<u32> = m
            .graph()
            .branches_at(w)
            .iter()
            .map(|&b| a.value(b))
            .collect();
        t.sort_unstable();
        assert_eq!(t, vec![1, 1, 6]);
        assert!(is_strict(&m, &a));
    }

    #[test]
    fn miura_examples() {
        let r = verify_miura(&tripod(), p(11)).unwrap();
        assert!(r.passed());
        assert_eq!(r.observed, "55 strict numberings checked");
        let r = verify_miura(&loop_with_leg(), p(7)).unwrap();
        assert_eq!(r.observed, "6 strict numberings checked");
        let r = verify_miura(&cycle_with_legs(3), p(5)).unwrap();
        assert_eq!(r.observed, "4 strict numberings checked");
    }

    #[test]
    fn figure_passes() {
        let r = verify_figure();
        assert!(r.passed(), "{r:?}");
        assert_eq!(
            r.observed,
            "vertex sums [12, 12, 12], image [0, 4, 4, 1, 3, 2, 1]"
        );
    }

    #[test]
    fn corpus_passes() {
        let reports = verify_corpus(&Prime::up_to(13)).unwrap();
        assert!(reports.iter().all(TheoremReport::passed));
        assert!(reports.len() > 40);
    }

    #[test]
    fn witnesses_replay() {
        // a hand-made numbering on theta that is not strict
        let m = theta();
        let a = BranchNumbering::from_slot0(&m, p(5), &[1, 1, 1]).unwrap();
        let w = witness(&m, &a, Property::NotStrict);
        assert!(replay(&m, &w).unwrap());
        let w = witness(&m, &a, Property::UnexpectedStrict);
        assert!(!replay(&m, &w).unwrap());

        // loop_with_leg numbering with a wrong exponent is not strict, but the
        // exponent property still replays on its own
        let g = loop_with_leg();
        let b = BranchNumbering::new(&g, p(7), vec![2, 5, 2, 5]).unwrap();
        assert!(replay(&g, &witness(&g, &b, Property::WrongExponent)).unwrap());

        let bogus = Witness::Triple(TripodCounterexample {
            p: 11,
            triple: [1, 2, 9],
            mu: [0, 4, 4],
            strict: true,
            mu_balanced: false,
        });
        assert!(!replay(&tripod(), &bogus).unwrap());

        let count = Witness::Count {
            p: 5,
            method: Method::Contraction,
            constraint: None,
            count: 3,
            expected: 0,
        };
        assert!(!replay(&theta(), &count).unwrap());
        let count = Witness::Count {
            p: 5,
            method: Method::Backtracking,
            constraint: None,
            count: 10,
            expected: 9,
        };
        assert!(replay(&tripod(), &count).unwrap());

        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["type"], "numbering");
    }
}
