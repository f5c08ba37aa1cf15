//! Finite marked semi-graphs.
//!
//! A semi-graph is a multigraph in which every edge consists of two branches,
//! and each branch is attached either to a vertex or to the distinguished open
//! point. Edges with one open branch are legs. Self-loops and parallel edges
//! are allowed, so branches are addressed by `(edge, slot)` rather than by
//! endpoint pairs.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, GraphError};

/// Half of an edge: the edge index together with a slot in `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    pub edge: usize,
    pub slot: u8,
}

impl Branch {
    pub fn new(edge: usize, slot: u8) -> Self {
        debug_assert!(slot < 2);
        Branch { edge, slot }
    }

    /// The other branch of the same edge.
    pub fn partner(self) -> Self {
        Branch {
            edge: self.edge,
            slot: 1 - self.slot,
        }
    }
}

/// Where a branch is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Incidence {
    Vertex(usize),
    Open,
}

impl Incidence {
    pub fn vertex(self) -> Option<usize> {
        match self {
            Incidence::Vertex(v) => Some(v),
            Incidence::Open => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: [Incidence; 2],
}

impl Edge {
    pub fn is_leg(&self) -> bool {
        self.ends.contains(&Incidence::Open)
    }

    pub fn is_self_loop(&self) -> bool {
        matches!(self.ends, [Incidence::Vertex(a), Incidence::Vertex(b)] if a == b)
    }

    /// Slot of the branch attached to the open point, if this is a leg.
    pub fn open_slot(&self) -> Option<u8> {
        self.ends
            .iter()
            .position(|end| *end == Incidence::Open)
            .map(|s| s as u8)
    }
}

/// An unmarked semi-graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct SemiGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    incident: Vec<Vec<Branch>>,
}

impl PartialEq for SemiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for SemiGraph {}

impl SemiGraph {
    /// Builds a semi-graph from vertex ids and edges given as `(id, [end0, end1])`,
    /// where `None` denotes the open point.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (String, [Option<String>; 2])>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }

        let mut built = Vec::new();
        let mut edge_index = HashMap::new();
        let mut incident = vec![Vec::new(); vertices.len()];
        for (id, raw_ends) in edges {
            if edge_index.contains_key(&id) {
                return Err(GraphError::DuplicateEdge(id));
            }
            let mut ends = [Incidence::Open; 2];
            for (slot, end) in raw_ends.iter().enumerate() {
                if let Some(name) = end {
                    let v = *vertex_index
                        .get(name)
                        .ok_or_else(|| GraphError::DanglingBranch {
                            edge: id.clone(),
                            vertex: name.clone(),
                        })?;
                    ends[slot] = Incidence::Vertex(v);
                }
            }
            if ends == [Incidence::Open; 2] {
                return Err(GraphError::DoublyOpenEdge(id));
            }
            let e = built.len();
            for (slot, end) in ends.iter().enumerate() {
                if let Incidence::Vertex(v) = end {
                    incident[*v].push(Branch::new(e, slot as u8));
                }
            }
            edge_index.insert(id.clone(), e);
            built.push(Edge { id, ends });
        }

        Ok(SemiGraph {
            vertices,
            edges: built,
            vertex_index,
            edge_index,
            incident,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn incidence(&self, b: Branch) -> Incidence {
        self.edges[b.edge].ends[b.slot as usize]
    }

    /// Branches attached to vertex `v`, ordered by edge then slot.
    pub fn branches_at(&self, v: usize) -> &[Branch] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// All branches attached to the open point, in edge order.
    pub fn open_branches(&self) -> impl Iterator<Item = Branch> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(e, edge)| edge.open_slot().map(|s| Branch::new(e, s)))
    }

    pub fn internal_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| !e.is_leg()).count()
    }

    /// Every pair of distinct vertices is joined by a path. Vacuous for a
    /// single vertex; false for the empty graph.
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for b in &self.incident[v] {
                if let Incidence::Vertex(w) = self.incidence(b.partner()) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of independent cycles, counted as the internal edges that close a
    /// cycle when edges are added one at a time to a union-find forest.
    pub fn cycle_rank(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut rank = 0;
        for edge in &self.edges {
            if let [Incidence::Vertex(a), Incidence::Vertex(b)] = edge.ends {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    rank += 1;
                } else {
                    parent[ra] = rb;
                }
            }
        }
        rank
    }
}

/// Genus and number of marked points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GraphType {
    pub g: u32,
    pub r: u32,
}

impl GraphType {
    pub fn is_stable(&self) -> bool {
        2 * self.g as i64 - 2 + self.r as i64 > 0
    }
}

impl fmt::Display for GraphType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.g, self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_type: Option<GraphType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<usize>,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// A closed non-backtracking walk of branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedLoop {
    pub base: usize,
    pub branches: Vec<Branch>,
    /// Set when the requested base lies on no reduced loop and `base` is
    /// another vertex.
    pub rebased: bool,
}

/// A semi-graph with its legs ordered. The marked branch of a leg is the one
/// attached to the open point; its label is its position in `marking` plus one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSemiGraph {
    graph: SemiGraph,
    marking: Vec<Branch>,
}

impl MarkedSemiGraph {
    /// Marks the legs of `graph` in the order of `marked_legs` (edge ids).
    /// Legs left out of the list make the graph fail validation but are not an
    /// error here.
    pub fn new<S: AsRef<str>>(graph: SemiGraph, marked_legs: &[S]) -> Result<Self, GraphError> {
        let mut marking = Vec::with_capacity(marked_legs.len());
        for id in marked_legs {
            let id = id.as_ref();
            let e = graph
                .edge_index(id)
                .ok_or_else(|| GraphError::UnknownMarkedEdge(id.to_string()))?;
            let slot = graph.edges[e]
                .open_slot()
                .ok_or_else(|| GraphError::MarkedNonLeg(id.to_string()))?;
            let b = Branch::new(e, slot);
            if marking.contains(&b) {
                return Err(GraphError::DuplicateMarking(id.to_string()));
            }
            marking.push(b);
        }
        Ok(MarkedSemiGraph { graph, marking })
    }

    /// Marks every leg in edge declaration order.
    pub fn with_default_marking(graph: SemiGraph) -> Self {
        let marking = graph.open_branches().collect();
        MarkedSemiGraph { graph, marking }
    }

    pub fn graph(&self) -> &SemiGraph {
        &self.graph
    }

    /// Marked (open-side) leg branches in label order.
    pub fn marking(&self) -> &[Branch] {
        &self.marking
    }

    pub fn leg_count(&self) -> usize {
        self.graph.open_branches().count()
    }

    /// `1 - |V| + |E| - r`, as a signed integer since it can be negative for
    /// disconnected or otherwise invalid inputs.
    fn genus_formula(&self) -> i64 {
        1 - self.graph.vertices.len() as i64 + self.graph.edges.len() as i64
            - self.leg_count() as i64
    }

    pub fn validate(&self) -> ValidationReport {
        let g = &self.graph;
        let mut checks = Vec::new();

        // Malformed incidence is rejected at construction time.
        checks.push(Check {
            name: "incidence",
            passed: true,
            detail: None,
        });

        let irregular: Vec<String> = (0..g.vertices.len())
            .filter(|&v| g.degree(v) != 3)
            .map(|v| format!("{} has degree {}", g.vertices[v], g.degree(v)))
            .collect();
        checks.push(Check {
            name: "three_regular",
            passed: irregular.is_empty(),
            detail: (!irregular.is_empty()).then(|| irregular.join("; ")),
        });

        let connected = g.is_connected();
        checks.push(Check {
            name: "connected",
            passed: connected,
            detail: (!connected).then(|| {
                if g.vertices.is_empty() {
                    "graph has no vertices".to_string()
                } else {
                    "some pair of vertices is joined by no path".to_string()
                }
            }),
        });

        let unmarked: Vec<&str> = g
            .open_branches()
            .filter(|b| !self.marking.contains(b))
            .map(|b| g.edges[b.edge].id.as_str())
            .collect();
        checks.push(Check {
            name: "marking",
            passed: unmarked.is_empty(),
            detail: (!unmarked.is_empty())
                .then(|| format!("unmarked legs: {}", unmarked.join(", "))),
        });

        let genus = self.genus_formula();
        let r = self.leg_count() as i64;
        let stable = 2 * genus - 2 + r > 0;
        checks.push(Check {
            name: "stable",
            passed: stable,
            detail: (!stable).then(|| format!("2g - 2 + r = {}", 2 * genus - 2 + r)),
        });

        let valid = checks.iter().all(|c| c.passed);
        let graph_type = valid.then_some(GraphType {
            g: genus as u32,
            r: r as u32,
        });
        ValidationReport {
            valid,
            checks,
            graph_type,
            betti: connected.then(|| g.cycle_rank()),
        }
    }

    /// Type `(g, r)` of a valid graph; errors if validation fails.
    pub fn graph_type(&self) -> Result<GraphType, Error> {
        let report = self.validate();
        report.graph_type.ok_or_else(|| {
            let reasons: Vec<String> = report
                .failures()
                .map(|c| match &c.detail {
                    Some(d) => format!("{}: {}", c.name, d),
                    None => c.name.to_string(),
                })
                .collect();
            Error::InvalidGraph(reasons.join("; "))
        })
    }

    /// First Betti number of the graph with legs removed.
    pub fn betti(&self) -> usize {
        self.graph.cycle_rank()
    }

    /// Shortest reduced loop based at `base`, or at the first vertex (in
    /// declaration order) that carries one when `base` does not. `None` for
    /// forests.
    pub fn reduced_loop(&self, base: usize) -> Option<ReducedLoop> {
        assert!(
            base < self.graph.vertices.len(),
            "vertex index out of range"
        );
        if let Some(branches) = self.shortest_reduced_loop(base) {
            return Some(ReducedLoop {
                base,
                branches,
                rebased: false,
            });
        }
        (0..self.graph.vertices.len())
            .filter(|&v| v != base)
            .find_map(|v| {
                self.shortest_reduced_loop(v).map(|branches| ReducedLoop {
                    base: v,
                    branches,
                    rebased: true,
                })
            })
    }

    fn shortest_reduced_loop(&self, base: usize) -> Option<Vec<Branch>> {
        let g = &self.graph;
        let internal = |b: &Branch| g.incidence(b.partner()) != Incidence::Open;
        let mut best: Option<Vec<Branch>> = None;

        for &start in g.branches_at(base).iter().filter(|b| internal(b)) {
            // BFS over traversed branches; a state `b` means we left ζ(b) via b.
            let mut pred: HashMap<Branch, Branch> = HashMap::new();
            let mut queue = VecDeque::from([start]);
            let mut seen = std::collections::HashSet::from([start]);
            let mut found = None;
            while let Some(b) = queue.pop_front() {
                let here = g.incidence(b.partner()).vertex().expect("internal branch");
                if here == base && start != b.partner() {
                    found = Some(b);
                    break;
                }
                for &c in g.branches_at(here) {
                    if c != b.partner() && internal(&c) && seen.insert(c) {
                        pred.insert(c, b);
                        queue.push_back(c);
                    }
                }
            }
            if let Some(mut last) = found {
                let mut walk = vec![last];
                while last != start {
                    last = pred[&last];
                    walk.push(last);
                }
                walk.reverse();
                if best.as_ref().is_none_or(|b| walk.len() < b.len()) {
                    best = Some(walk);
                }
            }
        }
        best
    }

    /// Whether `branches` is a path from `base` back to `base` with no
    /// immediate backtracking, including across the wrap-around.
    pub fn is_reduced_loop(&self, base: usize, branches: &[Branch]) -> bool {
        let g = &self.graph;
        let (Some(first), Some(last)) = (branches.first(), branches.last()) else {
            return false;
        };
        if g.incidence(*first) != Incidence::Vertex(base)
            || g.incidence(last.partner()) != Incidence::Vertex(base)
        {
            return false;
        }
        let consecutive = branches
            .windows(2)
            .all(|w| g.incidence(w[0].partner()) == g.incidence(w[1]) && w[1] != w[0].partner());
        consecutive && *first != last.partner()
    }
}
