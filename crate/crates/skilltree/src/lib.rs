//! Compiler for curriculum graphs: parse a curriculum definition, validate
//! it into a typed dependency graph, and derive teaching artifacts from it.
//!
//! A curriculum is a set of *skills* (things students learn to do) and
//! *concepts* (things students learn to understand), connected by typed
//! prerequisite edges. Courses carve a region out of that graph by naming
//! assumed prerequisites and goals. From there the crate can:
//!
//! - lint the graph and any proposed teaching order ([`lint`]),
//! - derive a teaching order that keeps related material together
//!   ([`plan`]),
//! - group the order into exam-sized blocks, each closed by a testable
//!   goal skill ([`blocks`]),
//! - export to Graphviz, JSON, Markdown or back to source ([`export`]).
//!
//! # Quick start
//!
//! ```
//! let curriculum = skilltree::compile(
//!     r#"
//!     skill solve "Solve a linear equation" { requires: rearrange }
//!     skill rearrange "Rearrange an equation"
//!     course "Algebra" { goal: solve }
//!     "#,
//!     "algebra.ctdl",
//! )
//! .expect("valid curriculum");
//!
//! let options = skilltree::plan::PlannerOptions::default();
//! let order =
//!     skilltree::plan::plan_order(&curriculum.graph, &curriculum.courses[0], &options).unwrap();
//! assert_eq!(order.items, ["rearrange", "solve"]);
//! ```
//!
//! The `examples/` directory contains one runnable program per capability;
//! start with `cargo run --example validate_curriculum`.

pub mod blocks;
pub mod cli;
pub mod diag;
pub mod export;
pub mod graph;
pub mod lint;
pub mod parse;
pub mod plan;

use diag::{catalog, Diagnostic, Severity};
use graph::{BuildError, CourseSpec, CurriculumGraph};

/// A fully validated curriculum: the graph plus its resolved courses.
#[derive(Debug)]
pub struct Curriculum {
    pub graph: CurriculumGraph,
    pub courses: Vec<CourseSpec>,
    /// Warnings collected while compiling (never contains errors).
    pub warnings: Vec<Diagnostic>,
}

/// Parses and validates a curriculum definition in one step.
///
/// Errors from every stage are collected rather than short-circuited, so a
/// failed compile reports as much as possible in one pass. `file` is only
/// used to label source locations. On success, non-fatal findings (such as
/// duplicate dependency facts) are kept in [`Curriculum::warnings`].
pub fn compile(source: &str, file: &str) -> Result<Curriculum, Vec<Diagnostic>> {
    let parsed = parse::parse(source, file);
    let mut diagnostics = parsed.diagnostics;

    match graph::build_graph(parsed.nodes, parsed.edges, parsed.exercises) {
        Ok(graph) => {
            let mut courses = Vec::new();
            for decl in &parsed.courses {
                match graph::resolve_course(&graph, decl) {
                    Ok(course) => courses.push(course),
                    Err(errors) => diagnostics.extend(errors.iter().flat_map(explain_build_error)),
                }
            }
            diag::sort_diagnostics(&mut diagnostics);
            if diag::has_errors(&diagnostics) {
                Err(diagnostics)
            } else {
                Ok(Curriculum { graph, courses, warnings: diagnostics })
            }
        }
        Err(errors) => {
            diagnostics.extend(errors.iter().flat_map(explain_build_error));
            diag::sort_diagnostics(&mut diagnostics);
            Err(diagnostics)
        }
    }
}

/// Maps a structural validation error to one or more diagnostics. Cycle
/// reports fan out to one diagnostic per cycle so each can carry its own
/// node list.
pub(crate) fn explain_build_error(error: &BuildError) -> Vec<Diagnostic> {
    let single = |code, message: String, nodes: Vec<String>, location: &Option<_>| {
        let mut diagnostic = Diagnostic::new(code, Severity::Error, message).with_nodes(nodes);
        if let Some(location) = location.clone() {
            diagnostic = diagnostic.at(location);
        }
        vec![diagnostic]
    };
    match error {
        BuildError::DuplicateId { id, location } => {
            single(catalog::E011, error.to_string(), vec![id.clone()], location)
        }
        BuildError::UnresolvedReference { id, location } => {
            single(catalog::E012, error.to_string(), vec![id.clone()], location)
        }
        BuildError::EdgeKindViolation { from, to, location, .. } => {
            single(catalog::E013, error.to_string(), vec![from.clone(), to.clone()], location)
        }
        BuildError::CycleDetected { cycles } => cycles
            .iter()
            .map(|cycle| {
                let mut path: Vec<&str> = cycle.iter().map(|n| n.as_str()).collect();
                path.push(cycle[0].as_str());
                Diagnostic::new(
                    catalog::E014,
                    Severity::Error,
                    format!("dependency cycle: {}", path.join(" -> ")),
                )
                .with_nodes(cycle.iter().map(|n| n.to_string()))
            })
            .collect(),
        BuildError::InvalidNode { id, location, .. }
        | BuildError::InvalidExercise { id, location, .. } => {
            single(catalog::E015, error.to_string(), vec![id.clone()], location)
        }
        BuildError::InvalidCourse { location, .. } => {
            single(catalog::E015, error.to_string(), Vec::new(), location)
        }
    }
}
