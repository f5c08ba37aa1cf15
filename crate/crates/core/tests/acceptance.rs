//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. All comparisons are exact.

use std::ops::ControlFlow;
use std::process::ExitCode;
use std::time::Instant;

use miura_core::builders;
use miura_core::io::Numbering;
use miura_core::miura::{check_pp004, miura_transform, mu_value, tripod_strict_set};
use miura_core::numbering::{exponent_of, is_balanced, is_branch_numbering, is_strict, radii_of};
use miura_core::search::{self, count, count_by_contraction, EnumerationQuery};
use miura_core::verify::{figure_numbering, verify_p048_structure};
use miura_core::{Branch, BranchNumbering, ExponentVector, Kind, MarkedSemiGraph, Prime};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(n: u32) -> Prime {
    Prime::new(n).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn strict_numberings(m: &MarkedSemiGraph, q: Prime) -> Vec<BranchNumbering> {
    let mut out = Vec::new();
    search::for_each(m, &EnumerationQuery::strict(q), |n| {
        if let Numbering::Strict(a) = n {
            out.push(a);
        }
        ControlFlow::Continue(())
    })
    .unwrap();
    out
}

fn both_totals(m: &MarkedSemiGraph, q: &EnumerationQuery) -> (u64, u64) {
    (
        count(m, q, false).unwrap().total,
        count_by_contraction(m, q, false).unwrap().total,
    )
}

/// Odd primes up to `n` by trial division, independent of `Prime::up_to`.
fn odd_primes_up_to(n: u32) -> Vec<u32> {
    (3..=n)
        .filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0))
        .collect()
}

fn tripod_dictionary() -> Outcome {
    let start = Instant::now();
    let primes = odd_primes_up_to(31);
    let mut triples = 0;
    for &q in &primes {
        let r = check_pp004(p(q));
        ensure(r.counterexamples.is_empty() && r.holds, || {
            format!(
                "p={q}: {} counterexamples, first {:?}",
                r.counterexamples.len(),
                r.counterexamples.first()
            )
        })?;
        ensure(r.triples as u32 == q * q, || {
            format!("p={q}: {} triples, expected {}", r.triples, q * q)
        })?;
        triples += r.triples;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2}s"))?;
    Ok(format!(
        "{} primes 3..31, {triples} triples, 0 counterexamples, {secs:.2}s",
        primes.len()
    ))
}

fn genus_bound() -> Outcome {
    let mut cells = 0;
    for (name, m) in [
        ("theta", builders::theta()),
        ("dumbbell", builders::dumbbell()),
    ] {
        ensure(m.graph_type().unwrap().g == 2, || {
            format!("{name} is not genus 2")
        })?;
        for q in [5, 7, 11, 13] {
            let (bt, ct) = both_totals(&m, &EnumerationQuery::strict(p(q)));
            ensure(bt == 0 && ct == 0, || {
                format!("{name} p={q}: backtracking {bt}, contraction {ct}")
            })?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells, all counts 0 by both methods"))
}

fn genus_one_count() -> Outcome {
    let graphs = [
        ("loop_with_leg", builders::loop_with_leg()),
        ("cycle:1", builders::cycle_with_legs(1)),
        ("cycle:2", builders::cycle_with_legs(2)),
        ("cycle:3", builders::cycle_with_legs(3)),
    ];
    let mut cells = 0;
    for (name, m) in &graphs {
        for q in [5u32, 7, 11] {
            let want = (q - 1) as u64;
            let all = strict_numberings(m, p(q));
            ensure(all.len() as u64 == want, || {
                format!("{name} p={q}: {} solutions", all.len())
            })?;
            let (bt, ct) = both_totals(m, &EnumerationQuery::strict(p(q)));
            ensure(bt == want && ct == want, || {
                format!("{name} p={q}: counts {bt}/{ct}")
            })?;
            let minus_one = ExponentVector(vec![q - 1; m.marking().len()]);
            for a in &all {
                let e = exponent_of(m, a);
                ensure(e == minus_one, || format!("{name} p={q}: exponent {e}"))?;
            }
            let constrained = EnumerationQuery::strict(p(q)).with_constraint(minus_one.clone());
            let (cb, cc) = both_totals(m, &constrained);
            ensure(cb == want && cc == want, || {
                format!("{name} p={q}: constrained counts {cb}/{cc}")
            })?;
            cells += 1;
        }
    }
    Ok(format!(
        "{cells} cells, count p-1 with exponent all p-1, constrained = unconstrained"
    ))
}

/// Edges on the unique cycle of a genus-one graph: self-loops and edges
/// whose ends stay connected once the edge is removed.
fn cycle_edges(m: &MarkedSemiGraph) -> Vec<usize> {
    let g = m.graph();
    let internal: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| (e.ends[0].vertex(), e.ends[1].vertex()))
        .map(|(a, b)| (a.unwrap_or(usize::MAX), b.unwrap_or(usize::MAX)))
        .collect();
    (0..internal.len())
        .filter(|&e| {
            let (a, b) = internal[e];
            if a == usize::MAX || b == usize::MAX {
                return false;
            }
            if a == b {
                return true;
            }
            let mut seen = vec![false; g.vertices().len()];
            let mut stack = vec![a];
            seen[a] = true;
            while let Some(v) = stack.pop() {
                for (f, &(x, y)) in internal.iter().enumerate() {
                    if f == e || x == usize::MAX || y == usize::MAX {
                        continue;
                    }
                    for (from, to) in [(x, y), (y, x)] {
                        if from == v && !seen[to] {
                            seen[to] = true;
                            stack.push(to);
                        }
                    }
                }
            }
            seen[b]
        })
        .collect()
}

fn genus_one_structure() -> Outcome {
    let graphs: Vec<(String, MarkedSemiGraph)> = builders::corpus()
        .into_iter()
        .filter(|(_, m)| m.graph_type().unwrap().g == 1)
        .collect();
    let mut solutions = 0;
    for (name, m) in &graphs {
        let cyc = cycle_edges(m);
        ensure(!cyc.is_empty(), || format!("{name}: no cycle found"))?;
        let g = m.graph();
        for q in [3u32, 5, 7, 11, 13] {
            let report = verify_p048_structure(m, p(q)).unwrap();
            ensure(report.passed(), || format!("{name} p={q}: {report:?}"))?;

            let all = strict_numberings(m, p(q));
            let reference = Branch::new(cyc[0], 0);
            let mut seen: Vec<u32> = Vec::new();
            for a in &all {
                for v in 0..g.vertices().len() {
                    let bs = g.branches_at(v);
                    let on: Vec<u32> = bs
                        .iter()
                        .filter(|b| cyc.contains(&b.edge))
                        .map(|&b| a.value(b))
                        .collect();
                    let off: Vec<u32> = bs
                        .iter()
                        .filter(|b| !cyc.contains(&b.edge))
                        .map(|&b| a.value(b))
                        .collect();
                    match on.len() {
                        // entering and leaving the cycle carry p-a and a
                        2 => ensure(on[0] + on[1] == q && off == [1], || {
                            format!("{name} p={q}: cycle vertex values {on:?} {off:?}")
                        })?,
                        0 => {
                            let mut t = off.clone();
                            t.sort_unstable();
                            ensure(t == [1, 1, q - 1], || {
                                format!("{name} p={q}: off-cycle multiset {t:?}")
                            })?;
                        }
                        k => return Err(format!("{name}: vertex meets the cycle in {k} branches")),
                    }
                }
                seen.push(a.value(reference));
            }
            seen.sort_unstable();
            let expected: Vec<u32> = (1..q).collect();
            ensure(seen == expected, || {
                format!("{name} p={q}: loop values {seen:?}")
            })?;
            solutions += all.len();
        }
    }
    Ok(format!(
        "{} genus-one graphs, {solutions} solutions, a -> solution bijective onto 1..p-1",
        graphs.len()
    ))
}

fn miura_codomain() -> Outcome {
    let mut checked = 0;
    let mut cells = 0;
    for (name, m) in builders::corpus() {
        for q in [5u32, 7, 11, 13] {
            for a in strict_numberings(&m, p(q)) {
                ensure(is_strict(&m, &a), || {
                    format!("{name} p={q}: enumerated numbering not strict")
                })?;
                for e in 0..m.graph().edges().len() {
                    let x0 = mu_value(p(q), a.value(Branch::new(e, 0))).unwrap();
                    let x1 = mu_value(p(q), a.value(Branch::new(e, 1))).unwrap();
                    ensure(x0 == x1, || {
                        format!("{name} p={q}: edge {e} maps to {x0} and {x1}")
                    })?;
                }
                let image = miura_transform(&m, &a).map_err(|e| format!("{name} p={q}: {e}"))?;
                ensure(is_balanced(&m, &image.numbering), || {
                    format!("{name} p={q}: image not balanced")
                })?;
                let mu_e: Vec<u32> = exponent_of(&m, &a)
                    .entries()
                    .iter()
                    .map(|&x| mu_value(p(q), x).unwrap())
                    .collect();
                let radii = radii_of(&m, &image.numbering);
                ensure(radii.entries() == mu_e.as_slice(), || {
                    format!("{name} p={q}: radii {radii} vs mu(exponent) {mu_e:?}")
                })?;
                checked += 1;
            }
            cells += 1;
        }
    }
    ensure(checked > 0, || "no strict numberings enumerated".into())?;
    Ok(format!(
        "{cells} cells, {checked} strict numberings, 100% edge-consistent and balanced"
    ))
}

/// Strict tripod numberings by direct scan: positive triples summing to p + 1.
fn naive_tripod_strict(q: u32) -> u64 {
    let mut n = 0;
    for a in 1..q {
        for b in 1..q {
            for c in 1..q {
                if a + b + c == q + 1 {
                    n += 1;
                }
            }
        }
    }
    n
}

fn tripod_census() -> Outcome {
    let t = builders::tripod();
    let mut parts = Vec::new();
    for q in [3u32, 5, 7, 11, 13] {
        let oracle = naive_tripod_strict(q);
        let closed = (q * (q - 1) / 2) as u64;
        let (bt, ct) = both_totals(&t, &EnumerationQuery::strict(p(q)));
        let listed = tripod_strict_set(p(q)).iter().filter(|x| x.strict).count() as u64;
        ensure(
            oracle == closed && bt == oracle && ct == oracle && listed == oracle,
            || {
                format!("p={q}: oracle {oracle}, p(p-1)/2 {closed}, backtracking {bt}, contraction {ct}, listed {listed}")
            },
        )?;
        parts.push(format!("p={q}:{oracle}"));
    }
    Ok(parts.join(" "))
}

fn figure_fixture() -> Outcome {
    let (m, a) = figure_numbering();
    let q = p(11);
    ensure(m.graph_type().unwrap().to_string() == "(0, 5)", || {
        "figure graph is not of type (0, 5)".into()
    })?;
    ensure(is_branch_numbering(&m, q, a.values()), || {
        "not a branch numbering".into()
    })?;
    ensure(is_strict(&m, &a), || "not strict".into())?;

    // Labels as drawn: each internal vertex and each edge's two ends.
    let figure_vertices = [[1, 2, 9], [2, 3, 7], [3, 4, 5]];
    let figure_edges = [(10, 1), (9, 2), (9, 2), (3, 8), (7, 4), (6, 5), (3, 8)];
    let g = m.graph();
    let mut sums = Vec::new();
    for (v, want) in figure_vertices.iter().enumerate() {
        let mut got: Vec<u32> = g.branches_at(v).iter().map(|&b| a.value(b)).collect();
        got.sort_unstable();
        ensure(&got[..] == want, || {
            format!("vertex {}: {got:?}, figure shows {want:?}", g.vertices()[v])
        })?;
        sums.push(got.iter().sum::<u32>());
    }
    ensure(sums == [12, 12, 12], || format!("vertex sums {sums:?}"))?;
    for (e, &(x, y)) in figure_edges.iter().enumerate() {
        let pair = (a.value(Branch::new(e, 0)), a.value(Branch::new(e, 1)));
        ensure(pair == (x, y) && x + y == 11, || {
            format!("edge {e}: {pair:?}, figure shows ({x}, {y})")
        })?;
    }
    let image = miura_transform(&m, &a).map_err(|e| e.to_string())?;
    ensure(image.numbering.values() == [0, 4, 4, 1, 3, 2, 1], || {
        format!("image {:?}", image.numbering.values())
    })?;
    ensure(is_balanced(&m, &image.numbering), || {
        "image not balanced".into()
    })?;
    Ok("vertex sums 12,12,12; image (0,4,4,1,3,2,1) balanced".into())
}

fn method_agreement() -> Outcome {
    let mut cells = 0;
    let mut total = 0u64;
    for (name, m) in builders::corpus() {
        let r = m.marking().len();
        for q in [3u32, 5, 7, 11] {
            for kind in [Kind::Strict, Kind::Balanced] {
                let constraints = [
                    None,
                    Some(ExponentVector(vec![q - 1; r])),
                    Some(ExponentVector(vec![1; r])),
                ];
                for c in constraints {
                    let mut query = EnumerationQuery::new(p(q), kind);
                    if let Some(c) = c.clone() {
                        query = query.with_constraint(c);
                    }
                    let (bt, ct) = both_totals(&m, &query);
                    ensure(bt == ct, || {
                        format!("{name} p={q} {kind} {c:?}: backtracking {bt}, contraction {ct}")
                    })?;
                    total += bt;
                    cells += 1;
                }
            }
        }
    }
    ensure(cells >= 60, || format!("only {cells} cells"))?;
    Ok(format!("{cells} cells agree (sum of totals {total})"))
}

fn decomposition() -> Outcome {
    let mut cells = 0;
    for (name, m) in builders::corpus() {
        let r = m.marking().len();
        if r > 2 {
            continue;
        }
        for q in [3u32, 5, 7] {
            for kind in [Kind::Strict, Kind::Balanced] {
                let whole = count(&m, &EnumerationQuery::new(p(q), kind), false)
                    .unwrap()
                    .total;
                let mut sum = 0;
                let tuples = (q as usize).pow(r as u32);
                for k in 0..tuples {
                    let mut digits = Vec::with_capacity(r);
                    let mut x = k;
                    for _ in 0..r {
                        digits.push((x % q as usize) as u32);
                        x /= q as usize;
                    }
                    digits.reverse();
                    let query =
                        EnumerationQuery::new(p(q), kind).with_constraint(ExponentVector(digits));
                    sum += count(&m, &query, false).unwrap().total;
                }
                ensure(sum == whole, || {
                    format!("{name} p={q} {kind}: parts sum to {sum}, whole is {whole}")
                })?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} cells with r <= 2, parts sum to the whole"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("tripod dictionary, all odd primes <= 31", tripod_dictionary),
        ("no strict numbering in genus 2", genus_bound),
        (
            "genus one: p-1 strict numberings, exponent all p-1",
            genus_one_count,
        ),
        (
            "genus one: constant loop value, off-loop [1,1,p-1]",
            genus_one_structure,
        ),
        (
            "Miura map edge-consistent with balanced image",
            miura_codomain,
        ),
        ("tripod strict census p(p-1)/2 vs naive scan", tripod_census),
        ("p=11 figure fixture", figure_fixture),
        ("backtracking and contraction agree", method_agreement),
        ("constrained counts partition the total", decomposition),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {title} [{detail}] ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title} [{why}] ({ms} ms)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
