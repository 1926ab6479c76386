//! The curriculum graph: skills and concepts connected by prerequisite edges.
//!
//! Edges always point from the dependent node to the node it requires, so
//! "a requires b" is stored as an edge `a -> b`. Three edge kinds exist and
//! each constrains its endpoint kinds:
//!
//! | kind                 | from    | to      | meaning                        |
//! |----------------------|---------|---------|--------------------------------|
//! | `Subskill`           | skill   | skill   | step needed to execute a skill |
//! | `Subconcept`         | concept | concept | notion needed to grasp another |
//! | `ConceptRequirement` | skill   | concept | notion a skill operates on     |
//!
//! A concept never requires a skill; [`build_graph`] rejects any edge whose
//! endpoints do not match its kind. Graphs are immutable once built, and all
//! iteration orders are deterministic (declaration order, or sorted ids for
//! set-valued results).

mod algo;
mod cycles;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::diag::SourceLocation;

pub use algo::GraphError;

/// Identifier token: lowercase letters, digits and underscores, not starting
/// with a digit. Shared by nodes and exercises.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("invalid identifier `{0}`: expected lowercase letters, digits or `_`, not starting with a digit")]
pub struct IdError(pub String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self, IdError> {
        let id = id.into();
        if Self::is_valid(&id) {
            Ok(Self(id))
        } else {
            Err(IdError(id))
        }
    }

    pub fn is_valid(id: &str) -> bool {
        let mut chars = id.chars();
        match chars.next() {
            Some(c) if c.is_ascii_lowercase() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for NodeId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl PartialEq<str> for NodeId {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for NodeId {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

impl From<NodeId> for String {
    fn from(id: NodeId) -> String {
        id.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Skill,
    Concept,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Skill => f.write_str("skill"),
            NodeKind::Concept => f.write_str("concept"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Subskill,
    Subconcept,
    ConceptRequirement,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeKind::Subskill => f.write_str("subskill"),
            EdgeKind::Subconcept => f.write_str("subconcept"),
            EdgeKind::ConceptRequirement => f.write_str("concept-requirement"),
        }
    }
}

/// A skill (something a student can do) or concept (something a student can
/// understand).
#[derive(Clone, Debug)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub title: String,
    pub tags: BTreeSet<String>,
    /// Set when the author attested the skill's execution order is covered
    /// by its subskills (the `covered` clause).
    pub attested_covered: bool,
    /// Declaration site, when the node came from source text.
    pub location: Option<SourceLocation>,
}

/// Prerequisite edge from a dependent node to the node it requires.
#[derive(Clone, Debug)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub kind: EdgeKind,
    /// Location of the reference that declared the edge, when available.
    pub location: Option<SourceLocation>,
}

/// A practice exercise testing one or more skills.
#[derive(Clone, Debug)]
pub struct Exercise {
    pub id: NodeId,
    pub title: String,
    pub tests: BTreeSet<NodeId>,
    pub location: Option<SourceLocation>,
}

/// A course carved out of the graph: what students already master
/// (prerequisites) and what they should master afterwards (goals).
///
/// Goals are meant to be skills; a concept goal is representable but flagged
/// by lint rule E106. Goal and prerequisite lists keep declaration order,
/// which downstream tie-breaking relies on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CourseSpec {
    pub name: String,
    pub prerequisites: Vec<NodeId>,
    pub goals: Vec<NodeId>,
    /// Optional pre-declared block goals; when present they take precedence
    /// over automatic block goal selection.
    pub declared_block_goals: Vec<NodeId>,
}

// ---------------------------------------------------------------------------
// Build inputs. These are produced by the parser or the JSON importer.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct NodeDecl {
    pub id: String,
    pub kind: NodeKind,
    pub title: String,
    pub tags: BTreeSet<String>,
    pub attested_covered: bool,
    pub location: Option<SourceLocation>,
}

#[derive(Clone, Debug)]
pub struct EdgeDecl {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
    pub location: Option<SourceLocation>,
}

#[derive(Clone, Debug)]
pub struct ExerciseDecl {
    pub id: String,
    pub title: String,
    pub tests: Vec<(String, Option<SourceLocation>)>,
    pub location: Option<SourceLocation>,
}

#[derive(Clone, Debug)]
pub struct CourseDecl {
    pub name: String,
    pub prerequisites: Vec<(String, Option<SourceLocation>)>,
    pub goals: Vec<(String, Option<SourceLocation>)>,
    pub block_goals: Vec<(String, Option<SourceLocation>)>,
    pub location: Option<SourceLocation>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("duplicate id `{id}`")]
    DuplicateId { id: String, location: Option<SourceLocation> },
    #[error("unresolved reference `{id}`")]
    UnresolvedReference { id: String, location: Option<SourceLocation> },
    #[error("invalid {kind} edge `{from}` -> `{to}`: {detail}")]
    EdgeKindViolation {
        from: String,
        to: String,
        kind: EdgeKind,
        detail: String,
        location: Option<SourceLocation>,
    },
    #[error("dependency cycle: {}", render_cycles(.cycles))]
    CycleDetected { cycles: Vec<Vec<NodeId>> },
    #[error("invalid node `{id}`: {reason}")]
    InvalidNode { id: String, reason: String, location: Option<SourceLocation> },
    #[error("invalid exercise `{id}`: {reason}")]
    InvalidExercise { id: String, reason: String, location: Option<SourceLocation> },
    #[error("invalid course \"{name}\": {reason}")]
    InvalidCourse { name: String, reason: String, location: Option<SourceLocation> },
}

fn render_cycles(cycles: &[Vec<NodeId>]) -> String {
    cycles
        .iter()
        .map(|c| {
            let mut s = c.iter().map(NodeId::as_str).collect::<Vec<_>>().join(" -> ");
            s.push_str(" -> ");
            s.push_str(c[0].as_str());
            s
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// An immutable skill/concept graph with typed prerequisite edges.
#[derive(Clone, Debug)]
pub struct CurriculumGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    exercises: Vec<Exercise>,
    index: HashMap<String, usize>,
    /// Outgoing edge indices per node (dependent -> prerequisite), in
    /// declaration order.
    outgoing: Vec<Vec<usize>>,
    /// Incoming edge indices per node (who depends on this node).
    incoming: Vec<Vec<usize>>,
}

impl CurriculumGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Nodes in declaration order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Edges in declaration order, deduplicated.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn exercises(&self) -> &[Exercise] {
        &self.exercises
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    /// Position of a node in declaration order.
    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node_at(&self, index: usize) -> &Node {
        &self.nodes[index]
    }

    /// Edges leaving the node at `index` (its direct prerequisites), in
    /// declaration order.
    pub fn outgoing_edges(&self, index: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.outgoing[index].iter().map(move |&e| &self.edges[e])
    }

    /// Edges entering the node at `index` (its direct dependents), in
    /// declaration order.
    pub fn incoming_edges(&self, index: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.incoming[index].iter().map(move |&e| &self.edges[e])
    }

    /// Direct prerequisite node indices of the node at `index`, with the
    /// connecting edge kind, in declaration order.
    pub fn prerequisites_of(&self, index: usize) -> impl Iterator<Item = (usize, EdgeKind)> + '_ {
        self.outgoing[index].iter().map(move |&e| {
            let edge = &self.edges[e];
            (self.index[edge.to.as_str()], edge.kind)
        })
    }

    /// Direct dependent node indices of the node at `index`.
    pub fn dependents_of(&self, index: usize) -> impl Iterator<Item = (usize, EdgeKind)> + '_ {
        self.incoming[index].iter().map(move |&e| {
            let edge = &self.edges[e];
            (self.index[edge.from.as_str()], edge.kind)
        })
    }

    /// Structural equality: same nodes (id, kind, title, tags, attestation)
    /// in the same order, same exercises, and per node the same prerequisite
    /// lists per edge kind. Source locations are ignored, as is the relative
    /// interleaving of different edge kinds (a round trip through the text
    /// format regroups clauses by kind).
    pub fn structural_eq(&self, other: &Self) -> bool {
        if self.nodes.len() != other.nodes.len()
            || self.edges.len() != other.edges.len()
            || self.exercises.len() != other.exercises.len()
        {
            return false;
        }
        let node_eq = self.nodes.iter().zip(&other.nodes).all(|(a, b)| {
            a.id == b.id
                && a.kind == b.kind
                && a.title == b.title
                && a.tags == b.tags
                && a.attested_covered == b.attested_covered
        });
        if !node_eq {
            return false;
        }
        let exercise_eq = self
            .exercises
            .iter()
            .zip(&other.exercises)
            .all(|(a, b)| a.id == b.id && a.title == b.title && a.tests == b.tests);
        if !exercise_eq {
            return false;
        }
        for kind in [EdgeKind::Subskill, EdgeKind::Subconcept, EdgeKind::ConceptRequirement] {
            for (i, _) in self.nodes.iter().enumerate() {
                let mine = self.outgoing[i]
                    .iter()
                    .map(|&e| &self.edges[e])
                    .filter(|e| e.kind == kind)
                    .map(|e| e.to.as_str());
                let theirs = other.outgoing[i]
                    .iter()
                    .map(|&e| &other.edges[e])
                    .filter(|e| e.kind == kind)
                    .map(|e| e.to.as_str());
                if !mine.eq(theirs) {
                    return false;
                }
            }
        }
        true
    }

    /// Assembles a graph without any validation. Intended for tests that
    /// need structurally ill-formed graphs (e.g. to exercise lint rule E101,
    /// which [`build_graph`] otherwise makes unreachable).
    #[doc(hidden)]
    pub fn from_parts_unchecked(
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        exercises: Vec<Exercise>,
    ) -> Self {
        let index: HashMap<String, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.id.as_str().to_owned(), i)).collect();
        assert_eq!(index.len(), nodes.len(), "duplicate node ids");
        let mut outgoing = vec![Vec::new(); nodes.len()];
        let mut incoming = vec![Vec::new(); nodes.len()];
        for (e, edge) in edges.iter().enumerate() {
            outgoing[index[edge.from.as_str()]].push(e);
            incoming[index[edge.to.as_str()]].push(e);
        }
        Self { nodes, edges, exercises, index, outgoing, incoming }
    }
}

/// Builds and validates a graph from declarations.
///
/// All detectable problems are returned at once: duplicate or invalid ids,
/// unresolved references, edges whose endpoint kinds do not match, and
/// dependency cycles. Cycle detection reports every elementary cycle up to a
/// cap of 10, each canonicalized to its lexicographically smallest rotation,
/// so the error is deterministic no matter how the graph was traversed.
/// Duplicate `(from, to, kind)` edges are dropped silently; the parser warns
/// about them at the source level.
pub fn build_graph(
    nodes: Vec<NodeDecl>,
    edges: Vec<EdgeDecl>,
    exercises: Vec<ExerciseDecl>,
) -> Result<CurriculumGraph, Vec<BuildError>> {
    let mut errors = Vec::new();

    let mut built_nodes: Vec<Node> = Vec::with_capacity(nodes.len());
    let mut index: HashMap<String, usize> = HashMap::with_capacity(nodes.len());
    for decl in nodes {
        let id = match NodeId::new(decl.id.clone()) {
            Ok(id) => id,
            Err(IdError(bad)) => {
                errors.push(BuildError::InvalidNode {
                    id: bad,
                    reason: "id is not a valid identifier".into(),
                    location: decl.location,
                });
                continue;
            }
        };
        if decl.title.is_empty() {
            errors.push(BuildError::InvalidNode {
                id: decl.id.clone(),
                reason: "title must not be empty".into(),
                location: decl.location.clone(),
            });
        }
        if index.contains_key(id.as_str()) {
            errors.push(BuildError::DuplicateId { id: decl.id, location: decl.location });
            continue;
        }
        index.insert(id.as_str().to_owned(), built_nodes.len());
        built_nodes.push(Node {
            id,
            kind: decl.kind,
            title: decl.title,
            tags: decl.tags,
            attested_covered: decl.attested_covered,
            location: decl.location,
        });
    }

    let mut built_edges: Vec<Edge> = Vec::with_capacity(edges.len());
    let mut seen_edges: BTreeSet<(usize, usize, EdgeKind)> = BTreeSet::new();
    let mut self_loops: Vec<Vec<NodeId>> = Vec::new();
    for decl in edges {
        let (from, to) = match (index.get(decl.from.as_str()), index.get(decl.to.as_str())) {
            (Some(&f), Some(&t)) => (f, t),
            (f, t) => {
                if f.is_none() {
                    errors.push(BuildError::UnresolvedReference {
                        id: decl.from.clone(),
                        location: decl.location.clone(),
                    });
                }
                if t.is_none() {
                    errors.push(BuildError::UnresolvedReference {
                        id: decl.to,
                        location: decl.location,
                    });
                }
                continue;
            }
        };
        let from_kind = built_nodes[from].kind;
        let to_kind = built_nodes[to].kind;
        let expected = match decl.kind {
            EdgeKind::Subskill => (NodeKind::Skill, NodeKind::Skill),
            EdgeKind::Subconcept => (NodeKind::Concept, NodeKind::Concept),
            EdgeKind::ConceptRequirement => (NodeKind::Skill, NodeKind::Concept),
        };
        if (from_kind, to_kind) != expected {
            errors.push(BuildError::EdgeKindViolation {
                from: decl.from,
                to: decl.to,
                kind: decl.kind,
                detail: format!(
                    "expected {} -> {}, found {} -> {}",
                    expected.0, expected.1, from_kind, to_kind
                ),
                location: decl.location,
            });
            continue;
        }
        if from == to {
            // A self edge is a one-node cycle; report it as such.
            if self_loops.iter().all(|c| c[0] != built_nodes[from].id) {
                self_loops.push(vec![built_nodes[from].id.clone()]);
            }
            continue;
        }
        if seen_edges.insert((from, to, decl.kind)) {
            built_edges.push(Edge {
                from: built_nodes[from].id.clone(),
                to: built_nodes[to].id.clone(),
                kind: decl.kind,
                location: decl.location,
            });
        }
    }

    let mut built_exercises: Vec<Exercise> = Vec::with_capacity(exercises.len());
    let mut exercise_ids: BTreeSet<String> = BTreeSet::new();
    for decl in exercises {
        let id = match NodeId::new(decl.id.clone()) {
            Ok(id) => id,
            Err(IdError(bad)) => {
                errors.push(BuildError::InvalidExercise {
                    id: bad,
                    reason: "id is not a valid identifier".into(),
                    location: decl.location,
                });
                continue;
            }
        };
        if !exercise_ids.insert(id.as_str().to_owned()) {
            errors.push(BuildError::DuplicateId { id: decl.id, location: decl.location });
            continue;
        }
        if decl.tests.is_empty() {
            errors.push(BuildError::InvalidExercise {
                id: decl.id,
                reason: "must test at least one skill".into(),
                location: decl.location,
            });
            continue;
        }
        let mut tests = BTreeSet::new();
        let mut ok = true;
        for (target, location) in decl.tests {
            match index.get(target.as_str()) {
                Some(&t) if built_nodes[t].kind == NodeKind::Skill => {
                    tests.insert(built_nodes[t].id.clone());
                }
                Some(_) => {
                    errors.push(BuildError::InvalidExercise {
                        id: decl.id.clone(),
                        reason: format!("tests `{target}`, which is a concept, not a skill"),
                        location,
                    });
                    ok = false;
                }
                None => {
                    errors.push(BuildError::UnresolvedReference { id: target, location });
                    ok = false;
                }
            }
        }
        if ok {
            built_exercises.push(Exercise {
                id,
                title: decl.title,
                tests,
                location: decl.location,
            });
        }
    }

    // Cycle detection runs on whatever edges validated; this keeps cycle
    // reports available even when other declarations are broken.
    let mut adjacency = vec![Vec::new(); built_nodes.len()];
    for edge in &built_edges {
        adjacency[index[edge.from.as_str()]].push(index[edge.to.as_str()]);
    }
    let mut cycle_list = self_loops;
    if !cycles::is_acyclic(&adjacency) {
        let found = cycles::elementary_cycles(&adjacency, &built_nodes, 10 - cycle_list.len());
        cycle_list.extend(found);
    }
    if !cycle_list.is_empty() {
        cycle_list.sort();
        cycle_list.truncate(10);
        errors.push(BuildError::CycleDetected { cycles: cycle_list });
    }

    if !errors.is_empty() {
        return Err(errors);
    }

    let mut outgoing = vec![Vec::new(); built_nodes.len()];
    let mut incoming = vec![Vec::new(); built_nodes.len()];
    for (e, edge) in built_edges.iter().enumerate() {
        outgoing[index[edge.from.as_str()]].push(e);
        incoming[index[edge.to.as_str()]].push(e);
    }

    Ok(CurriculumGraph {
        nodes: built_nodes,
        edges: built_edges,
        exercises: built_exercises,
        index,
        outgoing,
        incoming,
    })
}

/// Resolves a course declaration against a built graph.
///
/// Checks that every referenced node exists, that the goal list is not empty
/// and that goals and prerequisites are disjoint. Reference lists are
/// deduplicated but keep their declaration order.
pub fn resolve_course(
    graph: &CurriculumGraph,
    decl: &CourseDecl,
) -> Result<CourseSpec, Vec<BuildError>> {
    let mut errors = Vec::new();

    let resolve_list = |items: &[(String, Option<SourceLocation>)],
                        errors: &mut Vec<BuildError>| {
        let mut out: Vec<NodeId> = Vec::with_capacity(items.len());
        for (id, location) in items {
            match graph.node(id) {
                Some(node) => {
                    if !out.iter().any(|n| n == &node.id) {
                        out.push(node.id.clone());
                    }
                }
                None => errors.push(BuildError::UnresolvedReference {
                    id: id.clone(),
                    location: location.clone(),
                }),
            }
        }
        out
    };

    let prerequisites = resolve_list(&decl.prerequisites, &mut errors);
    let goals = resolve_list(&decl.goals, &mut errors);
    let block_goals = resolve_list(&decl.block_goals, &mut errors);

    if decl.goals.is_empty() {
        errors.push(BuildError::InvalidCourse {
            name: decl.name.clone(),
            reason: "must declare at least one goal".into(),
            location: decl.location.clone(),
        });
    }
    for goal in &goals {
        if prerequisites.contains(goal) {
            errors.push(BuildError::InvalidCourse {
                name: decl.name.clone(),
                reason: format!("`{goal}` is declared both as a goal and as a prerequisite"),
                location: decl.location.clone(),
            });
        }
    }

    if errors.is_empty() {
        Ok(CourseSpec {
            name: decl.name.clone(),
            prerequisites,
            goals,
            declared_block_goals: block_goals,
        })
    } else {
        Err(errors)
    }
}

#[cfg(test)]
mod tests;
