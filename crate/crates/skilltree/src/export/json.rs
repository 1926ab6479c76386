//! Versioned JSON documents.
//!
//! Every document is an envelope `{ "version": 1, "kind": ..., "payload":
//! ... }`. Kinds: `graph` (the dependency graph with its courses),
//! `sequence` (a teaching order), `plan` (a block plan with balance
//! metrics) and `diagnostics` (a report). Object keys are emitted sorted
//! and arrays keep declaration order, so output is byte-stable.
//!
//! [`from_json`] reads `graph` documents back. It is strict: unknown
//! fields, missing fields or a different version are errors, and the
//! decoded declarations go through the same validation as parsed source.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::blocks::{BalanceMetrics, BlockPlan};
use crate::diag::Diagnostic;
use crate::graph::{
    build_graph, resolve_course, BuildError, CourseDecl, CourseSpec, CurriculumGraph, EdgeDecl,
    EdgeKind, ExerciseDecl, NodeDecl, NodeKind,
};
use crate::plan::TeachingSequence;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("invalid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema version {found}; this tool reads version {SCHEMA_VERSION}")]
    Version { found: u64 },
    #[error("expected a \"graph\" document, found kind \"{found}\"")]
    Kind { found: String },
    #[error("the imported graph is invalid")]
    Graph(Vec<BuildError>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    version: u64,
    kind: String,
    payload: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphPayload {
    nodes: Vec<NodeDto>,
    edges: Vec<EdgeDto>,
    exercises: Vec<ExerciseDto>,
    courses: Vec<CourseDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NodeKindDto {
    Skill,
    Concept,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum EdgeKindDto {
    Subskill,
    Subconcept,
    ConceptRequirement,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDto {
    id: String,
    kind: NodeKindDto,
    title: String,
    tags: Vec<String>,
    covered: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDto {
    from: String,
    to: String,
    kind: EdgeKindDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExerciseDto {
    id: String,
    title: String,
    tests: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CourseDto {
    name: String,
    prerequisites: Vec<String>,
    goals: Vec<String>,
    block_goals: Vec<String>,
}

/// Serializes a value through [`Value`] so object keys come out sorted,
/// then pretty-prints with a trailing newline.
fn render(kind: &str, payload: Value) -> String {
    let envelope = Envelope { version: SCHEMA_VERSION, kind: kind.to_string(), payload };
    let value = serde_json::to_value(&envelope).expect("serializable");
    let mut text = serde_json::to_string_pretty(&value).expect("serializable");
    text.push('\n');
    text
}

/// The graph and its courses as a `graph` document.
pub fn graph_to_json(graph: &CurriculumGraph, courses: &[CourseSpec]) -> String {
    let payload = GraphPayload {
        nodes: graph
            .nodes()
            .iter()
            .map(|node| NodeDto {
                id: node.id.to_string(),
                kind: match node.kind {
                    NodeKind::Skill => NodeKindDto::Skill,
                    NodeKind::Concept => NodeKindDto::Concept,
                },
                title: node.title.clone(),
                tags: node.tags.iter().cloned().collect(),
                covered: node.attested_covered,
            })
            .collect(),
        edges: graph
            .edges()
            .iter()
            .map(|edge| EdgeDto {
                from: edge.from.to_string(),
                to: edge.to.to_string(),
                kind: match edge.kind {
                    EdgeKind::Subskill => EdgeKindDto::Subskill,
                    EdgeKind::Subconcept => EdgeKindDto::Subconcept,
                    EdgeKind::ConceptRequirement => EdgeKindDto::ConceptRequirement,
                },
            })
            .collect(),
        exercises: graph
            .exercises()
            .iter()
            .map(|exercise| ExerciseDto {
                id: exercise.id.to_string(),
                title: exercise.title.clone(),
                tests: exercise.tests.iter().map(|t| t.to_string()).collect(),
            })
            .collect(),
        courses: courses
            .iter()
            .map(|course| CourseDto {
                name: course.name.clone(),
                prerequisites: course.prerequisites.iter().map(|p| p.to_string()).collect(),
                goals: course.goals.iter().map(|g| g.to_string()).collect(),
                block_goals: course.declared_block_goals.iter().map(|g| g.to_string()).collect(),
            })
            .collect(),
    };
    render("graph", serde_json::to_value(payload).expect("serializable"))
}

/// A teaching order as a `sequence` document.
pub fn sequence_to_json(sequence: &TeachingSequence) -> String {
    let payload = serde_json::json!({
        "course": sequence.course,
        "items": sequence.items.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
    });
    render("sequence", payload)
}

/// A block plan, with its balance metrics, as a `plan` document.
pub fn plan_to_json(plan: &BlockPlan, metrics: &BalanceMetrics) -> String {
    let payload = serde_json::json!({
        "course": plan.course,
        "blocks": plan.blocks.iter().map(|block| serde_json::json!({
            "number": block.number,
            "goal": block.goal.to_string(),
            "members": block.members.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "metrics": {
            "min": metrics.min,
            "max": metrics.max,
            "mean": metrics.mean,
            "ratio": metrics.ratio,
        },
    });
    render("plan", payload)
}

/// A report as a `diagnostics` document.
pub fn diagnostics_to_json(diagnostics: &[Diagnostic]) -> String {
    render("diagnostics", serde_json::to_value(diagnostics).expect("serializable"))
}

/// Reads a `graph` document back into a validated graph and its courses.
pub fn from_json(text: &str) -> Result<(CurriculumGraph, Vec<CourseSpec>), SchemaError> {
    let envelope: Envelope = serde_json::from_str(text)?;
    if envelope.version != SCHEMA_VERSION {
        return Err(SchemaError::Version { found: envelope.version });
    }
    if envelope.kind != "graph" {
        return Err(SchemaError::Kind { found: envelope.kind });
    }
    let payload: GraphPayload = serde_json::from_value(envelope.payload)?;

    let nodes = payload
        .nodes
        .into_iter()
        .map(|node| NodeDecl {
            id: node.id,
            kind: match node.kind {
                NodeKindDto::Skill => NodeKind::Skill,
                NodeKindDto::Concept => NodeKind::Concept,
            },
            title: node.title,
            tags: node.tags.into_iter().collect(),
            attested_covered: node.covered,
            location: None,
        })
        .collect();
    let edges = payload
        .edges
        .into_iter()
        .map(|edge| EdgeDecl {
            from: edge.from,
            to: edge.to,
            kind: match edge.kind {
                EdgeKindDto::Subskill => EdgeKind::Subskill,
                EdgeKindDto::Subconcept => EdgeKind::Subconcept,
                EdgeKindDto::ConceptRequirement => EdgeKind::ConceptRequirement,
            },
            location: None,
        })
        .collect();
    let exercises = payload
        .exercises
        .into_iter()
        .map(|exercise| ExerciseDecl {
            id: exercise.id,
            title: exercise.title,
            tests: exercise.tests.into_iter().map(|t| (t, None)).collect(),
            location: None,
        })
        .collect();

    let graph = build_graph(nodes, edges, exercises).map_err(SchemaError::Graph)?;
    let mut courses = Vec::with_capacity(payload.courses.len());
    for course in payload.courses {
        let decl = CourseDecl {
            name: course.name,
            prerequisites: course.prerequisites.into_iter().map(|p| (p, None)).collect(),
            goals: course.goals.into_iter().map(|g| (g, None)).collect(),
            block_goals: course.block_goals.into_iter().map(|g| (g, None)).collect(),
            location: None,
        };
        courses.push(resolve_course(&graph, &decl).map_err(SchemaError::Graph)?);
    }
    Ok((graph, courses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    const SRC: &str = "
        skill solve \"Solve\" { requires: move_term
            uses: equation
            tags: algebra, core }
        skill move_term \"Move a term\" { covered }
        concept equation \"Equation\"
        exercise quiz \"Quiz\" { tests: solve, move_term }
        course \"Algebra\" { goal: solve
            block-goal: solve }";

    fn fixture() -> (CurriculumGraph, Vec<CourseSpec>) {
        let result = parse(SRC, "json.ctdl");
        let graph = build_graph(result.nodes, result.edges, result.exercises).unwrap();
        let courses = result.courses.iter().map(|c| resolve_course(&graph, c).unwrap()).collect();
        (graph, courses)
    }

    #[test]
    fn graph_documents_round_trip() {
        let (graph, courses) = fixture();
        let text = graph_to_json(&graph, &courses);
        let (back, back_courses) = from_json(&text).unwrap();
        assert!(graph.structural_eq(&back));
        assert_eq!(courses, back_courses);
        // And the re-export is byte-identical.
        assert_eq!(text, graph_to_json(&back, &back_courses));
    }

    #[test]
    fn envelope_has_version_kind_and_sorted_keys() {
        let (graph, courses) = fixture();
        let text = graph_to_json(&graph, &courses);
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["version"], 1);
        assert_eq!(value["kind"], "graph");
        let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["kind", "payload", "version"]);
        assert_eq!(value["payload"]["edges"][1]["kind"], "concept-requirement");
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn wrong_version_kind_and_unknown_fields_are_rejected() {
        let (graph, courses) = fixture();
        let text = graph_to_json(&graph, &courses);

        let bumped = text.replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(from_json(&bumped), Err(SchemaError::Version { found: 2 })));

        let relabeled = text.replace("\"kind\": \"graph\"", "\"kind\": \"sequence\"");
        assert!(matches!(from_json(&relabeled), Err(SchemaError::Kind { .. })));

        let mut value: Value = serde_json::from_str(&text).unwrap();
        value["payload"]["nodes"][0]["color"] = "red".into();
        assert!(matches!(
            from_json(&serde_json::to_string(&value).unwrap()),
            Err(SchemaError::Parse(_))
        ));

        let mut value: Value = serde_json::from_str(&text).unwrap();
        value["payload"]["nodes"][0].as_object_mut().unwrap().remove("title");
        assert!(matches!(
            from_json(&serde_json::to_string(&value).unwrap()),
            Err(SchemaError::Parse(_))
        ));
    }

    #[test]
    fn imported_graphs_are_validated() {
        let (graph, courses) = fixture();
        let text = graph_to_json(&graph, &courses);
        let mut value: Value = serde_json::from_str(&text).unwrap();
        value["payload"]["edges"][0]["to"] = "ghost".into();
        let err = from_json(&serde_json::to_string(&value).unwrap()).unwrap_err();
        match err {
            SchemaError::Graph(errors) => {
                assert!(errors.iter().any(
                    |e| matches!(e, BuildError::UnresolvedReference { id, .. } if id == "ghost")
                ));
            }
            other => panic!("expected graph errors, got {other}"),
        }
    }

    #[test]
    fn sequence_plan_and_diagnostics_documents_render() {
        use crate::blocks::{balance_metrics, group_blocks};
        use crate::lint::LintConfig;
        use crate::plan::{plan_order, PlannerOptions};

        let (graph, courses) = fixture();
        let sequence = plan_order(&graph, &courses[0], &PlannerOptions::default()).unwrap();
        let text = sequence_to_json(&sequence);
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["kind"], "sequence");
        assert_eq!(value["payload"]["items"][0], "move_term");

        let plan = group_blocks(&graph, &sequence, &["solve"]).unwrap();
        let (metrics, _) = balance_metrics(&plan, &LintConfig::default());
        let text = plan_to_json(&plan, &metrics);
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["kind"], "plan");
        assert_eq!(value["payload"]["blocks"][0]["number"], 1);
        assert_eq!(value["payload"]["metrics"]["ratio"], 1.0);

        let report = crate::lint::lint_graph(&graph, &courses, &LintConfig::default());
        let text = diagnostics_to_json(&report);
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["kind"], "diagnostics");
        assert!(value["payload"].is_array());
    }
}
