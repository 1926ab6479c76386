use super::*;

pub(crate) fn node(id: &str, kind: NodeKind) -> NodeDecl {
    NodeDecl {
        id: id.into(),
        kind,
        title: id.to_uppercase(),
        tags: BTreeSet::new(),
        attested_covered: false,
        location: None,
    }
}

pub(crate) fn edge(from: &str, to: &str, kind: EdgeKind) -> EdgeDecl {
    EdgeDecl { from: from.into(), to: to.into(), kind, location: None }
}

/// All-skill graph from subskill pairs (dependent, prerequisite).
pub(crate) fn graph_from(ids: &[&str], edges_list: &[(&str, &str)]) -> CurriculumGraph {
    build_graph(
        ids.iter().map(|id| node(id, NodeKind::Skill)).collect(),
        edges_list.iter().map(|(f, t)| edge(f, t, EdgeKind::Subskill)).collect(),
        vec![],
    )
    .unwrap()
}

fn exercise(id: &str, tests: &[&str]) -> ExerciseDecl {
    ExerciseDecl {
        id: id.into(),
        title: id.to_uppercase(),
        tests: tests.iter().map(|t| (t.to_string(), None)).collect(),
        location: None,
    }
}

#[test]
fn builds_a_small_curriculum() {
    let g = build_graph(
        vec![
            node("solve", NodeKind::Skill),
            node("move_term", NodeKind::Skill),
            node("equation", NodeKind::Concept),
        ],
        vec![
            edge("solve", "move_term", EdgeKind::Subskill),
            edge("solve", "equation", EdgeKind::ConceptRequirement),
        ],
        vec![exercise("ex1", &["solve"])],
    )
    .unwrap();
    assert_eq!(g.node_count(), 3);
    assert_eq!(g.edge_count(), 2);
    assert_eq!(g.exercises().len(), 1);
    assert_eq!(g.node("solve").unwrap().kind, NodeKind::Skill);
    assert!(g.contains("equation"));
    assert!(!g.contains("nope"));
}

#[test]
fn node_id_grammar() {
    for ok in ["a", "_x", "ab_c9", "x1"] {
        assert!(NodeId::is_valid(ok), "{ok}");
    }
    for bad in ["", "9a", "A", "aB", "a-b", "a b", "ä"] {
        assert!(!NodeId::is_valid(bad), "{bad}");
        assert!(NodeId::new(bad).is_err());
    }
}

#[test]
fn duplicate_node_ids_are_rejected() {
    let err =
        build_graph(vec![node("a", NodeKind::Skill), node("a", NodeKind::Concept)], vec![], vec![])
            .unwrap_err();
    assert!(matches!(&err[..], [BuildError::DuplicateId { id, .. }] if id == "a"));
}

#[test]
fn unresolved_references_are_all_reported() {
    let err = build_graph(
        vec![node("a", NodeKind::Skill)],
        vec![edge("a", "ghost", EdgeKind::Subskill), edge("phantom", "a", EdgeKind::Subskill)],
        vec![],
    )
    .unwrap_err();
    let ids: Vec<_> = err
        .iter()
        .map(|e| match e {
            BuildError::UnresolvedReference { id, .. } => id.as_str(),
            other => panic!("unexpected error {other:?}"),
        })
        .collect();
    assert_eq!(ids, vec!["ghost", "phantom"]);
}

#[test]
fn edge_kinds_are_enforced() {
    // requires pointing at a concept must be `uses` instead.
    let err = build_graph(
        vec![node("a", NodeKind::Skill), node("c", NodeKind::Concept)],
        vec![edge("a", "c", EdgeKind::Subskill)],
        vec![],
    )
    .unwrap_err();
    assert!(matches!(&err[..], [BuildError::EdgeKindViolation { kind: EdgeKind::Subskill, .. }]));

    // a concept can never depend on a skill, whatever the kind says.
    for kind in [EdgeKind::Subconcept, EdgeKind::ConceptRequirement, EdgeKind::Subskill] {
        let err = build_graph(
            vec![node("c", NodeKind::Concept), node("s", NodeKind::Skill)],
            vec![edge("c", "s", kind)],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err.len(), 1, "{kind:?}");
        assert!(matches!(&err[0], BuildError::EdgeKindViolation { .. }));
    }
}

#[test]
fn cycles_are_reported_in_canonical_rotation() {
    let err = build_graph(
        vec![node("b", NodeKind::Skill), node("c", NodeKind::Skill), node("a", NodeKind::Skill)],
        vec![
            edge("a", "b", EdgeKind::Subskill),
            edge("b", "c", EdgeKind::Subskill),
            edge("c", "a", EdgeKind::Subskill),
        ],
        vec![],
    )
    .unwrap_err();
    match &err[..] {
        [BuildError::CycleDetected { cycles }] => {
            let rendered: Vec<Vec<&str>> =
                cycles.iter().map(|c| c.iter().map(NodeId::as_str).collect()).collect();
            assert_eq!(rendered, vec![vec!["a", "b", "c"]]);
        }
        other => panic!("unexpected errors {other:?}"),
    }
}

#[test]
fn self_edge_is_a_one_node_cycle() {
    let err = build_graph(
        vec![node("a", NodeKind::Skill)],
        vec![edge("a", "a", EdgeKind::Subskill)],
        vec![],
    )
    .unwrap_err();
    match &err[..] {
        [BuildError::CycleDetected { cycles }] => {
            assert_eq!(cycles, &vec![vec![NodeId::new("a").unwrap()]])
        }
        other => panic!("unexpected errors {other:?}"),
    }
}

#[test]
fn duplicate_edges_are_dropped_silently() {
    let g = build_graph(
        vec![node("a", NodeKind::Skill), node("b", NodeKind::Skill)],
        vec![edge("a", "b", EdgeKind::Subskill), edge("a", "b", EdgeKind::Subskill)],
        vec![],
    )
    .unwrap();
    assert_eq!(g.edge_count(), 1);
}

#[test]
fn empty_title_is_invalid() {
    let mut n = node("a", NodeKind::Skill);
    n.title.clear();
    let err = build_graph(vec![n], vec![], vec![]).unwrap_err();
    assert!(
        matches!(&err[..], [BuildError::InvalidNode { reason, .. }] if reason.contains("title"))
    );
}

#[test]
fn exercises_must_test_existing_skills() {
    let nodes = vec![node("a", NodeKind::Skill), node("c", NodeKind::Concept)];
    let err = build_graph(nodes.clone(), vec![], vec![exercise("ex", &["c"])]).unwrap_err();
    assert!(
        matches!(&err[..], [BuildError::InvalidExercise { reason, .. }] if reason.contains("concept"))
    );

    let err = build_graph(nodes.clone(), vec![], vec![exercise("ex", &[])]).unwrap_err();
    assert!(
        matches!(&err[..], [BuildError::InvalidExercise { reason, .. }] if reason.contains("at least one"))
    );

    let err = build_graph(nodes, vec![], vec![exercise("ex", &["a"]), exercise("ex", &["a"])])
        .unwrap_err();
    assert!(matches!(&err[..], [BuildError::DuplicateId { id, .. }] if id == "ex"));
}

#[test]
fn course_resolution_checks_goals() {
    let g = graph_from(&["a", "b"], &[("a", "b")]);
    let decl = CourseDecl {
        name: "main".into(),
        prerequisites: vec![("b".into(), None)],
        goals: vec![("a".into(), None)],
        block_goals: vec![],
        location: None,
    };
    let course = resolve_course(&g, &decl).unwrap();
    assert_eq!(course.goals, vec![NodeId::new("a").unwrap()]);

    let empty = CourseDecl { goals: vec![], ..decl.clone() };
    let err = resolve_course(&g, &empty).unwrap_err();
    assert!(
        matches!(&err[..], [BuildError::InvalidCourse { reason, .. }] if reason.contains("goal"))
    );

    let overlapping = CourseDecl { goals: vec![("b".into(), None)], ..decl.clone() };
    let err = resolve_course(&g, &overlapping).unwrap_err();
    assert!(
        matches!(&err[..], [BuildError::InvalidCourse { reason, .. }] if reason.contains("both"))
    );

    let dangling = CourseDecl { goals: vec![("x".into(), None)], prerequisites: vec![], ..decl };
    let err = resolve_course(&g, &dangling).unwrap_err();
    assert!(matches!(&err[..], [BuildError::UnresolvedReference { id, .. }] if id == "x"));
}

#[test]
fn course_lists_are_deduplicated_in_order() {
    let g = graph_from(&["a", "b", "c"], &[("a", "b"), ("a", "c")]);
    let decl = CourseDecl {
        name: "main".into(),
        prerequisites: vec![],
        goals: vec![("c".into(), None), ("a".into(), None), ("c".into(), None)],
        block_goals: vec![],
        location: None,
    };
    let course = resolve_course(&g, &decl).unwrap();
    let goals: Vec<_> = course.goals.iter().map(NodeId::as_str).collect();
    assert_eq!(goals, vec!["c", "a"]);
}

#[test]
fn structural_eq_ignores_locations_and_kind_interleaving() {
    let a = build_graph(
        vec![node("s", NodeKind::Skill), node("t", NodeKind::Skill), node("c", NodeKind::Concept)],
        vec![edge("s", "t", EdgeKind::Subskill), edge("s", "c", EdgeKind::ConceptRequirement)],
        vec![],
    )
    .unwrap();
    // Same facts, concept requirement declared first.
    let b = build_graph(
        vec![node("s", NodeKind::Skill), node("t", NodeKind::Skill), node("c", NodeKind::Concept)],
        vec![edge("s", "c", EdgeKind::ConceptRequirement), edge("s", "t", EdgeKind::Subskill)],
        vec![],
    )
    .unwrap();
    assert!(a.structural_eq(&b));

    // Different node order is a structural difference.
    let c = build_graph(
        vec![node("t", NodeKind::Skill), node("s", NodeKind::Skill), node("c", NodeKind::Concept)],
        vec![edge("s", "t", EdgeKind::Subskill), edge("s", "c", EdgeKind::ConceptRequirement)],
        vec![],
    )
    .unwrap();
    assert!(!a.structural_eq(&c));
}
