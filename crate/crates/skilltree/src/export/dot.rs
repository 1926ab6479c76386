//! Graphviz output.
//!
//! The graph is drawn bottom-up: arrows point from a prerequisite to the
//! node that builds on it, with `rankdir=BT` so foundations sit at the
//! bottom. Skills are boxes, concepts ellipses. Given a course, its goals
//! get a heavier outline and nodes outside the course contents are dashed
//! (or omitted entirely when `include_prerequisite_nodes` is off).

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::graph::{CourseSpec, CurriculumGraph, NodeKind};

#[derive(Clone, Copy, Debug)]
pub struct DotOptions {
    /// Keep nodes that fall outside the course contents (the assumed
    /// prerequisites and everything below them). They render dashed.
    pub include_prerequisite_nodes: bool,
}

impl Default for DotOptions {
    fn default() -> Self {
        Self { include_prerequisite_nodes: true }
    }
}

/// Renders the graph as DOT. With a course, goals and out-of-content nodes
/// are styled; without one every node is drawn plainly.
pub fn to_dot(
    graph: &CurriculumGraph,
    course: Option<&CourseSpec>,
    options: &DotOptions,
) -> String {
    let contents: Option<BTreeSet<String>> = course.map(|course| {
        graph
            .course_contents(course)
            .map(|set| set.into_iter().map(Into::into).collect())
            .unwrap_or_default()
    });
    let goals: BTreeSet<&str> =
        course.map(|c| c.goals.iter().map(|g| g.as_str()).collect()).unwrap_or_default();

    let in_scope = |id: &str| -> bool {
        match &contents {
            Some(contents) => options.include_prerequisite_nodes || contents.contains(id),
            None => true,
        }
    };
    let dashed =
        |id: &str| -> bool { matches!(&contents, Some(contents) if !contents.contains(id)) };

    let mut out = String::new();
    out.push_str("digraph curriculum {\n");
    out.push_str("    rankdir=BT;\n");

    let mut nodes: Vec<_> = graph.nodes().iter().filter(|n| in_scope(n.id.as_str())).collect();
    nodes.sort_by_key(|n| n.id.as_str());
    for node in &nodes {
        let shape = match node.kind {
            NodeKind::Skill => "box",
            NodeKind::Concept => "ellipse",
        };
        write!(out, "    \"{}\" [shape={shape} label=\"{}\"", node.id, super::escape(&node.title))
            .unwrap();
        if dashed(node.id.as_str()) {
            out.push_str(" style=dashed");
        }
        if goals.contains(node.id.as_str()) {
            out.push_str(" penwidth=2");
        }
        out.push_str("];\n");
    }

    // Arrows run prerequisite -> dependent: "learn the tail first".
    let mut arrows: Vec<(&str, &str)> = graph
        .edges()
        .iter()
        .filter(|e| in_scope(e.from.as_str()) && in_scope(e.to.as_str()))
        .map(|e| (e.to.as_str(), e.from.as_str()))
        .collect();
    arrows.sort_unstable();
    for (tail, head) in arrows {
        writeln!(out, "    \"{tail}\" -> \"{head}\";").unwrap();
    }

    out.push_str("}\n");
    out
}
