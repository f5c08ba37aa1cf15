//! Small marked graphs used throughout the tests and by `--builtin`.

use crate::semigraph::{MarkedSemiGraph, SemiGraph};

type RawEdge = (String, [Option<String>; 2]);

fn edge(id: &str, a: Option<&str>, b: Option<&str>) -> RawEdge {
    (
        id.to_string(),
        [a.map(str::to_string), b.map(str::to_string)],
    )
}

fn build(vertices: &[&str], edges: Vec<RawEdge>, marking: &[&str]) -> MarkedSemiGraph {
    let graph =
        SemiGraph::new(vertices.iter().copied(), edges).expect("builder graph is well formed");
    MarkedSemiGraph::new(graph, marking).expect("builder marking is well formed")
}

/// One vertex with three legs; type (0, 3).
pub fn tripod() -> MarkedSemiGraph {
    build(
        &["v"],
        vec![
            edge("l1", Some("v"), None),
            edge("l2", Some("v"), None),
            edge("l3", Some("v"), None),
        ],
        &["l1", "l2", "l3"],
    )
}

/// Two vertices joined by three parallel edges; type (2, 0).
pub fn theta() -> MarkedSemiGraph {
    build(
        &["u", "v"],
        vec![
            edge("e1", Some("u"), Some("v")),
            edge("e2", Some("u"), Some("v")),
            edge("e3", Some("u"), Some("v")),
        ],
        &[],
    )
}

/// Two self-loops joined by a bridge; type (2, 0).
pub fn dumbbell() -> MarkedSemiGraph {
    build(
        &["u", "v"],
        vec![
            edge("a", Some("u"), Some("u")),
            edge("bridge", Some("u"), Some("v")),
            edge("b", Some("v"), Some("v")),
        ],
        &[],
    )
}

/// `n` vertices on a cycle, one leg at each; type (1, n). For `n = 1` the
/// cycle is a self-loop and for `n = 2` a pair of parallel edges.
pub fn cycle_with_legs(n: usize) -> MarkedSemiGraph {
    assert!(n >= 1, "cycle_with_legs needs at least one vertex");
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..n {
        edges.push(edge(
            &format!("c{}", i + 1),
            Some(&names[i]),
            Some(&names[(i + 1) % n]),
        ));
    }
    for (i, v) in names.iter().enumerate() {
        edges.push(edge(&format!("l{}", i + 1), Some(v), None));
    }
    let legs: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
    let graph = SemiGraph::new(names.iter().cloned(), edges).expect("builder graph is well formed");
    MarkedSemiGraph::new(graph, &legs).expect("builder marking is well formed")
}

/// One vertex carrying a self-loop and a leg; type (1, 1).
pub fn loop_with_leg() -> MarkedSemiGraph {
    build(
        &["v"],
        vec![
            edge("loop", Some("v"), Some("v")),
            edge("l1", Some("v"), None),
        ],
        &["l1"],
    )
}

/// A self-loop vertex joined to a vertex with two legs; type (1, 2). The
/// second vertex lies off the cycle.
pub fn lollipop() -> MarkedSemiGraph {
    build(
        &["u", "w"],
        vec![
            edge("loop", Some("u"), Some("u")),
            edge("stick", Some("u"), Some("w")),
            edge("l1", Some("w"), None),
            edge("l2", Some("w"), None),
        ],
        &["l1", "l2"],
    )
}

/// Two vertices joined by an edge, two legs at each; type (0, 4).
pub fn two_vertex_tree() -> MarkedSemiGraph {
    build(
        &["u", "v"],
        vec![
            edge("l1", Some("u"), None),
            edge("l2", Some("u"), None),
            edge("mid", Some("u"), Some("v")),
            edge("l3", Some("v"), None),
            edge("l4", Some("v"), None),
        ],
        &["l1", "l2", "l3", "l4"],
    )
}

/// The type (0, 5) tree with three internal vertices `B - D - F` and legs
/// `A, C` at `B`, `E` at `D`, `G, H` at `F`. Edge slots are oriented so that
/// [`FIGURE_BRANCH_PAIRS`] lists `(slot 0, slot 1)` values.
pub fn figure_tree() -> MarkedSemiGraph {
    build(
        &["B", "D", "F"],
        vec![
            edge("A", None, Some("B")),
            edge("C", None, Some("B")),
            edge("BD", Some("B"), Some("D")),
            edge("E", Some("D"), None),
            edge("DF", Some("D"), Some("F")),
            edge("G", None, Some("F")),
            edge("H", Some("F"), None),
        ],
        &["A", "C", "E", "G", "H"],
    )
}

/// Branch values of the strict 11-numbering drawn on [`figure_tree`], per edge
/// in declaration order as `(slot 0, slot 1)`.
pub const FIGURE_BRANCH_PAIRS: [(u32, u32); 7] =
    [(10, 1), (9, 2), (9, 2), (3, 8), (7, 4), (6, 5), (3, 8)];

/// Builder by name, as accepted by `--builtin`: `tripod`, `theta`,
/// `dumbbell`, `loop_with_leg`, `lollipop`, `two_vertex_tree`, `figure` or
/// `cycle:N`.
pub fn by_name(name: &str) -> Option<MarkedSemiGraph> {
    match name {
        "tripod" => Some(tripod()),
        "theta" => Some(theta()),
        "dumbbell" => Some(dumbbell()),
        "loop_with_leg" => Some(loop_with_leg()),
        "lollipop" => Some(lollipop()),
        "two_vertex_tree" => Some(two_vertex_tree()),
        "figure" => Some(figure_tree()),
        _ => {
            let n: usize = name.strip_prefix("cycle:")?.parse().ok()?;
            (n >= 1).then(|| cycle_with_legs(n))
        }
    }
}

/// Every builder with a short name, small enough for exhaustive checks.
pub fn corpus() -> Vec<(String, MarkedSemiGraph)> {
    vec![
        ("tripod".into(), tripod()),
        ("theta".into(), theta()),
        ("dumbbell".into(), dumbbell()),
        ("loop_with_leg".into(), loop_with_leg()),
        ("cycle:1".into(), cycle_with_legs(1)),
        ("cycle:2".into(), cycle_with_legs(2)),
        ("cycle:3".into(), cycle_with_legs(3)),
        ("lollipop".into(), lollipop()),
        ("two_vertex_tree".into(), two_vertex_tree()),
        ("figure".into(), figure_tree()),
    ]
}
