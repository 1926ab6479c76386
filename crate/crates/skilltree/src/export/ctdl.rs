//! Renders a graph back to curriculum definition language source.
//!
//! Statements come out in declaration order, one per statement with a blank
//! line between them. Dependency clauses keep the order the edges were
//! declared in, so parsing the output reproduces the input graph
//! structurally (see [`CurriculumGraph::structural_eq`]).

use std::fmt::Write;

use crate::graph::{CourseSpec, CurriculumGraph, EdgeKind, NodeKind};

use super::escape;

/// The graph and its courses as curriculum definition language source.
pub fn export_ctdl(graph: &CurriculumGraph, courses: &[CourseSpec]) -> String {
    let mut out = String::new();
    let separate = |out: &mut String| {
        if !out.is_empty() {
            out.push('\n');
        }
    };

    for (index, node) in graph.nodes().iter().enumerate() {
        separate(&mut out);
        let keyword = match node.kind {
            NodeKind::Skill => "skill",
            NodeKind::Concept => "concept",
        };
        write!(out, "{keyword} {} \"{}\"", node.id, escape(&node.title)).unwrap();

        let same_kind = match node.kind {
            NodeKind::Skill => EdgeKind::Subskill,
            NodeKind::Concept => EdgeKind::Subconcept,
        };
        let requires: Vec<&str> = graph
            .outgoing_edges(index)
            .filter(|e| e.kind == same_kind)
            .map(|e| e.to.as_str())
            .collect();
        let uses: Vec<&str> = graph
            .outgoing_edges(index)
            .filter(|e| e.kind == EdgeKind::ConceptRequirement)
            .map(|e| e.to.as_str())
            .collect();

        let mut body = Vec::new();
        if !requires.is_empty() {
            body.push(format!("requires: {}", requires.join(", ")));
        }
        if !uses.is_empty() {
            body.push(format!("uses: {}", uses.join(", ")));
        }
        if !node.tags.is_empty() {
            let tags: Vec<&str> = node.tags.iter().map(String::as_str).collect();
            body.push(format!("tags: {}", tags.join(", ")));
        }
        if node.attested_covered {
            body.push("covered".to_string());
        }
        write_body(&mut out, &body);
    }

    for exercise in graph.exercises() {
        separate(&mut out);
        write!(out, "exercise {} \"{}\"", exercise.id, escape(&exercise.title)).unwrap();
        let mut body = Vec::new();
        if !exercise.tests.is_empty() {
            let tests: Vec<&str> = exercise.tests.iter().map(|t| t.as_str()).collect();
            body.push(format!("tests: {}", tests.join(", ")));
        }
        write_body(&mut out, &body);
    }

    for course in courses {
        separate(&mut out);
        write!(out, "course \"{}\"", escape(&course.name)).unwrap();
        let mut body = Vec::new();
        for (clause, ids) in [
            ("prerequisite", &course.prerequisites),
            ("goal", &course.goals),
            ("block-goal", &course.declared_block_goals),
        ] {
            if !ids.is_empty() {
                let ids: Vec<&str> = ids.iter().map(|i| i.as_str()).collect();
                body.push(format!("{clause}: {}", ids.join(", ")));
            }
        }
        write_body(&mut out, &body);
    }

    out
}

/// Appends ` { ... }` with one clause per line, or nothing when the body is
/// empty (the grammar makes braces optional).
fn write_body(out: &mut String, clauses: &[String]) {
    if clauses.is_empty() {
        out.push('\n');
        return;
    }
    out.push_str(" {\n");
    for clause in clauses {
        out.push_str("    ");
        out.push_str(clause);
        out.push('\n');
    }
    out.push_str("}\n");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, resolve_course};
    use crate::parse::parse;

    fn compile(src: &str) -> (CurriculumGraph, Vec<CourseSpec>) {
        let result = parse(src, "export.ctdl");
        assert!(!result.has_errors(), "{:?}", result.diagnostics);
        let graph = build_graph(result.nodes, result.edges, result.exercises).unwrap();
        let courses = result.courses.iter().map(|c| resolve_course(&graph, c).unwrap()).collect();
        (graph, courses)
    }

    #[test]
    fn renders_statements_in_declaration_order() {
        let (graph, courses) = compile(
            "skill b \"Both \\\"kinds\\\"\" { uses: c\n requires: a\n tags: z, a\n covered }
             skill a \"Base\"
             concept c \"Idea\"
             exercise quiz \"Quiz\" { tests: b, a }
             course \"Demo\" { prerequisite: c\n goal: b\n block-goal: b }",
        );
        let expected = "\
skill b \"Both \\\"kinds\\\"\" {
    requires: a
    uses: c
    tags: a, z
    covered
}

skill a \"Base\"

concept c \"Idea\"

exercise quiz \"Quiz\" {
    tests: a, b
}

course \"Demo\" {
    prerequisite: c
    goal: b
    block-goal: b
}
";
        assert_eq!(export_ctdl(&graph, &courses), expected);
    }

    #[test]
    fn output_reparses_to_a_structurally_equal_graph() {
        let src = "
            skill top \"Top\" { requires: mid, base\n uses: idea }
            skill mid \"Mid\" { requires: base }
            skill base \"Base\" { covered }
            concept idea \"Idea\" { requires: axiom }
            concept axiom \"Axiom\"
            exercise e1 \"One\" { tests: top }
            course \"C\" { prerequisite: axiom\n goal: top }";
        let (graph, courses) = compile(src);
        let text = export_ctdl(&graph, &courses);
        let (back, back_courses) = compile(&text);
        assert!(graph.structural_eq(&back));
        assert_eq!(courses, back_courses);
        // A second round trip is byte-identical.
        assert_eq!(text, export_ctdl(&back, &back_courses));
    }

    #[test]
    fn clause_order_within_a_kind_is_preserved() {
        // `requires: z, a` must not be re-sorted: subskill order is the
        // author's chosen presentation order.
        let (graph, courses) =
            compile("skill s \"S\" { requires: z, a }\n skill z \"Z\"\n skill a \"A\"");
        let text = export_ctdl(&graph, &courses);
        assert!(text.contains("requires: z, a"), "{text}");
    }
}
