//! Turns a course into a teaching order.
//!
//! The planner walks depth-first from each goal, emitting every node after
//! all of its prerequisites (post-order), so the sequence never teaches
//! anything before the things it builds on. Two choices shape the result:
//!
//! * Subskills are visited before the concepts a node uses, so abstract
//!   knowledge lands right before the skill that needs it instead of long
//!   in advance.
//! * Among prerequisites of the same class, larger subtrees come first:
//!   the bulkiest unfamiliar material starts early, and small follow-ups
//!   cluster near the dependent that motivates them.
//!
//! Subtree sizes are measured once against the full course contents and
//! never shrink as nodes are visited, so the order of two siblings does not
//! depend on which goals were planned earlier.

use thiserror::Error;

use crate::graph::{CourseSpec, CurriculumGraph, EdgeKind, GraphError, NodeId};

/// How to order prerequisites whose subtree sizes tie.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Keep the order in which the dependencies were declared.
    #[default]
    DeclarationOrder,
    /// Order ties by node id, useful when the declaration order is noise
    /// (e.g. generated input).
    IdLexicographic,
}

#[derive(Clone, Debug)]
pub struct PlannerOptions {
    pub tie_break: TieBreak,
    /// Whether concepts count towards subtree sizes. On by default: a
    /// skill with heavy theory behind it is genuinely bigger to teach.
    pub count_concepts_in_subtree_size: bool,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        Self { tie_break: TieBreak::default(), count_concepts_in_subtree_size: true }
    }
}

/// A complete teaching order for one course, earliest item first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeachingSequence {
    pub course: String,
    pub items: Vec<NodeId>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    /// Everything the goals need is already covered by the prerequisites.
    #[error("course `{course}` has nothing to teach: its goals are covered by the prerequisites")]
    EmptyContents { course: String },
    #[error("unknown node `{id}`")]
    UnresolvedReference { id: String },
}

impl From<GraphError> for PlanError {
    fn from(err: GraphError) -> Self {
        match err {
            GraphError::UnresolvedReference { id } => PlanError::UnresolvedReference { id },
        }
    }
}

/// Plans the teaching order for `course`. The course must have been
/// resolved against `graph`.
pub fn plan_order(
    graph: &CurriculumGraph,
    course: &CourseSpec,
    options: &PlannerOptions,
) -> Result<TeachingSequence, PlanError> {
    let contents = graph.course_contents(course)?;
    if contents.is_empty() {
        return Err(PlanError::EmptyContents { course: course.name.clone() });
    }

    let n = graph.node_count();
    let mut scope = vec![false; n];
    for id in &contents {
        if let Some(index) = graph.node_index(id.as_str()) {
            scope[index] = true;
        }
    }
    let sizes = graph.subtree_sizes_bulk(&scope, options.count_concepts_in_subtree_size);

    // Prerequisites of one node, restricted to the contents: subskills
    // first, then concepts, each class largest-subtree-first.
    let ordered_prerequisites = |v: usize| -> Vec<usize> {
        let mut subskills = Vec::new();
        let mut concepts = Vec::new();
        for edge in graph.outgoing_edges(v) {
            let Some(target) = graph.node_index(edge.to.as_str()) else { continue };
            if !scope[target] {
                continue;
            }
            match edge.kind {
                EdgeKind::Subskill => subskills.push(target),
                EdgeKind::ConceptRequirement | EdgeKind::Subconcept => concepts.push(target),
            }
        }
        for class in [&mut subskills, &mut concepts] {
            if options.tie_break == TieBreak::IdLexicographic {
                class.sort_by(|&a, &b| graph.node_at(a).id.cmp(&graph.node_at(b).id));
            }
            // Stable, so ties keep the order established above.
            class.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]));
        }
        subskills.extend(concepts);
        subskills
    };

    let mut items = Vec::with_capacity(contents.len());
    let mut visited = vec![false; n];
    for goal in &course.goals {
        let Some(start) = graph.node_index(goal.as_str()) else {
            return Err(PlanError::UnresolvedReference { id: goal.to_string() });
        };
        // A goal that the prerequisites already cover contributes nothing.
        if !scope[start] || visited[start] {
            continue;
        }
        visited[start] = true;
        let mut stack = vec![(start, ordered_prerequisites(start).into_iter())];
        while let Some((v, pending)) = stack.last_mut() {
            let v = *v;
            match pending.next() {
                Some(next) if !visited[next] => {
                    visited[next] = true;
                    stack.push((next, ordered_prerequisites(next).into_iter()));
                }
                Some(_) => {}
                None => {
                    items.push(graph.node_at(v).id.clone());
                    stack.pop();
                }
            }
        }
    }

    Ok(TeachingSequence { course: course.name.clone(), items })
}
