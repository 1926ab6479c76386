//! Shared helpers for the integration suites: brute-force oracles that
//! restate the graph semantics from first principles (sets and raw edge
//! lists, no shared code with the implementations under test) and a
//! deterministic random-curriculum generator.
#![allow(dead_code)] // each test target uses a different subset

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skilltree::graph::{
    build_graph, resolve_course, CourseDecl, CourseSpec, CurriculumGraph, EdgeDecl, EdgeKind,
    NodeDecl, NodeKind,
};

/// Prerequisite adjacency (`from` depends on each entry) rebuilt from the
/// raw edge list.
fn adjacency(graph: &CurriculumGraph) -> BTreeMap<&str, Vec<&str>> {
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for edge in graph.edges() {
        adj.entry(edge.from.as_str()).or_default().push(edge.to.as_str());
    }
    adj
}

/// Everything reachable from `seeds` by one or more prerequisite edges.
/// A seed only appears in the result if some other seed (or itself, via a
/// cycle-free longer path) reaches it.
pub fn brute_closure(graph: &CurriculumGraph, seeds: &[&str]) -> BTreeSet<String> {
    let adj = adjacency(graph);
    let mut reached = BTreeSet::new();
    let mut queue: VecDeque<&str> =
        seeds.iter().flat_map(|s| adj.get(s).into_iter().flatten().copied()).collect();
    while let Some(node) = queue.pop_front() {
        if reached.insert(node.to_string()) {
            queue.extend(adj.get(node).into_iter().flatten().copied());
        }
    }
    reached
}

/// Course contents by definition: goals plus everything below them, minus
/// the prerequisites and everything below those.
pub fn brute_contents(graph: &CurriculumGraph, course: &CourseSpec) -> BTreeSet<String> {
    let goals: Vec<&str> = course.goals.iter().map(|g| g.as_str()).collect();
    let prereqs: Vec<&str> = course.prerequisites.iter().map(|p| p.as_str()).collect();
    let mut contents = brute_closure(graph, &goals);
    contents.extend(goals.iter().map(|g| g.to_string()));
    for known in brute_closure(graph, &prereqs).iter().map(String::as_str).chain(prereqs) {
        contents.remove(known);
    }
    contents
}

/// Subtree size by definition: the node itself plus its in-scope closure.
pub fn brute_subtree_size(graph: &CurriculumGraph, node: &str, scope: &BTreeSet<String>) -> usize {
    brute_closure(graph, &[node]).iter().filter(|n| scope.contains(*n)).count() + 1
}

/// Redundant subconcept edges by definition: `a -> c` is redundant when
/// some other direct subconcept `b` of `a` already reaches `c` through
/// subconcept edges.
pub fn brute_redundant_subconcepts(graph: &CurriculumGraph) -> BTreeSet<(String, String)> {
    let subconcept_edges: Vec<(&str, &str)> = graph
        .edges()
        .iter()
        .filter(|e| e.kind == EdgeKind::Subconcept)
        .map(|e| (e.from.as_str(), e.to.as_str()))
        .collect();
    let reaches = |from: &str, to: &str| -> bool {
        // Reflexive-transitive reachability over subconcept edges only.
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(node) = queue.pop_front() {
            if node == to {
                return true;
            }
            for &(f, t) in &subconcept_edges {
                if f == node && seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        false
    };
    let mut redundant = BTreeSet::new();
    for &(a, c) in &subconcept_edges {
        let implied = subconcept_edges.iter().any(|&(f, b)| f == a && b != c && reaches(b, c));
        if implied {
            redundant.insert((a.to_string(), c.to_string()));
        }
    }
    redundant
}

/// Checks that `items` is a topological order of exactly the course
/// contents: step by step, every item must have all its in-content direct
/// prerequisites already placed.
pub fn is_topological_order_of_contents(
    graph: &CurriculumGraph,
    course: &CourseSpec,
    items: &[impl AsRef<str>],
) -> bool {
    let contents = brute_contents(graph, course);
    let placed_all: BTreeSet<&str> = items.iter().map(|i| i.as_ref()).collect();
    if placed_all.len() != items.len()
        || placed_all != contents.iter().map(String::as_str).collect()
    {
        return false;
    }
    let adj = adjacency(graph);
    let mut placed: BTreeSet<&str> = BTreeSet::new();
    for item in items {
        let item = item.as_ref();
        let ready = adj
            .get(item)
            .into_iter()
            .flatten()
            .all(|&prereq| !contents.contains(prereq) || placed.contains(prereq));
        if !ready {
            return false;
        }
        placed.insert(item);
    }
    true
}

/// Exhaustively enumerates every topological order of the course contents.
/// Only call this for small contents (the count is factorial).
pub fn enumerate_topological_orders(
    graph: &CurriculumGraph,
    course: &CourseSpec,
) -> Vec<Vec<String>> {
    let contents = brute_contents(graph, course);
    let adj = adjacency(graph);
    let mut orders = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    let mut remaining: BTreeSet<&str> = contents.iter().map(String::as_str).collect();

    fn extend<'a>(
        adj: &BTreeMap<&str, Vec<&'a str>>,
        contents: &BTreeSet<String>,
        current: &mut Vec<&'a str>,
        remaining: &mut BTreeSet<&'a str>,
        orders: &mut Vec<Vec<String>>,
    ) {
        if remaining.is_empty() {
            orders.push(current.iter().map(|s| s.to_string()).collect());
            return;
        }
        let candidates: Vec<&str> = remaining
            .iter()
            .filter(|&&node| {
                adj.get(node)
                    .into_iter()
                    .flatten()
                    .all(|&prereq| !contents.contains(prereq) || current.contains(&prereq))
            })
            .copied()
            .collect();
        for node in candidates {
            remaining.remove(node);
            current.push(node);
            extend(adj, contents, current, remaining, orders);
            current.pop();
            remaining.insert(node);
        }
    }
    extend(&adj, &contents, &mut current, &mut remaining, &mut orders);
    orders
}

/// A deterministic random curriculum: up to 10 nodes, each forward pair
/// wired with probability 0.3 where the edge kind is legal, plus one
/// course with random goals and prerequisites. Declaration indices only
/// ever point forward, so the result is always acyclic and builds cleanly.
pub fn random_curriculum(seed: u64) -> (CurriculumGraph, CourseSpec) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];
    let n = rng.random_range(1..=ids.len());

    let kinds: Vec<NodeKind> = (0..n)
        .map(|_| if rng.random_bool(0.7) { NodeKind::Skill } else { NodeKind::Concept })
        .collect();
    let nodes: Vec<NodeDecl> = (0..n)
        .map(|i| NodeDecl {
            id: ids[i].to_string(),
            kind: kinds[i],
            title: ids[i].to_uppercase(),
            tags: BTreeSet::new(),
            attested_covered: false,
            location: None,
        })
        .collect();

    let mut edges = Vec::new();
    for from in 0..n {
        for to in from + 1..n {
            let kind = match (kinds[from], kinds[to]) {
                (NodeKind::Skill, NodeKind::Skill) => EdgeKind::Subskill,
                (NodeKind::Skill, NodeKind::Concept) => EdgeKind::ConceptRequirement,
                (NodeKind::Concept, NodeKind::Concept) => EdgeKind::Subconcept,
                (NodeKind::Concept, NodeKind::Skill) => continue, // never legal
            };
            if rng.random_bool(0.3) {
                edges.push(EdgeDecl {
                    from: ids[from].to_string(),
                    to: ids[to].to_string(),
                    kind,
                    location: None,
                });
            }
        }
    }

    let graph = build_graph(nodes, edges, Vec::new()).expect("forward edges cannot cycle");

    // Goals: a nonempty random subset; prerequisites: a random subset of
    // the remaining nodes (courses reject overlap).
    let mut goals: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.3)).collect();
    if goals.is_empty() {
        goals.push(rng.random_range(0..n));
    }
    let prerequisites: Vec<usize> =
        (0..n).filter(|i| !goals.contains(i) && rng.random_bool(0.2)).collect();
    let decl = CourseDecl {
        name: "Random".to_string(),
        prerequisites: prerequisites.iter().map(|&i| (ids[i].to_string(), None)).collect(),
        goals: goals.iter().map(|&i| (ids[i].to_string(), None)).collect(),
        block_goals: Vec::new(),
        location: None,
    };
    let course = resolve_course(&graph, &decl).expect("generated course is consistent");
    (graph, course)
}
