use std::collections::BTreeSet;

use super::*;
use crate::graph::{build_graph, resolve_course, Edge, Node, NodeId};
use crate::parse::parse;

/// Builds a graph and its courses from source, insisting the input itself
/// is clean so tests only see the lint under scrutiny.
fn compile(src: &str) -> (CurriculumGraph, Vec<CourseSpec>) {
    let result = parse(src, "lint.ctdl");
    assert!(
        result.diagnostics.is_empty(),
        "fixture should parse cleanly: {:?}",
        result.diagnostics
    );
    let graph = build_graph(result.nodes, result.edges, result.exercises)
        .unwrap_or_else(|errs| panic!("fixture should build cleanly: {errs:?}"));
    let courses = result.courses.iter().map(|c| resolve_course(&graph, c).unwrap()).collect();
    (graph, courses)
}

fn codes(diagnostics: &[Diagnostic]) -> Vec<&'static str> {
    diagnostics.iter().map(|d| d.code).collect()
}

fn lint(src: &str) -> Vec<Diagnostic> {
    let (graph, courses) = compile(src);
    lint_graph(&graph, &courses, &LintConfig::default())
}

// ----- graph rules ------------------------------------------------------

#[test]
fn concept_depending_on_skill_is_flagged() {
    // The builder refuses such edges, so assemble the graph by hand.
    let node = |id: &str, kind| Node {
        id: NodeId::new(id).unwrap(),
        kind,
        title: id.to_uppercase(),
        tags: BTreeSet::new(),
        attested_covered: false,
        location: None,
    };
    let graph = CurriculumGraph::from_parts_unchecked(
        vec![node("liquid", NodeKind::Concept), node("pour", NodeKind::Skill)],
        vec![Edge {
            from: NodeId::new("liquid").unwrap(),
            to: NodeId::new("pour").unwrap(),
            kind: EdgeKind::Subconcept,
            location: None,
        }],
        Vec::new(),
    );
    let report = lint_graph(&graph, &[], &LintConfig::default());
    assert_eq!(codes(&report), ["E101"]);
    assert_eq!(report[0].nodes, ["liquid", "pour"]);
}

#[test]
fn redundant_subconcept_edge_is_flagged_with_a_witness() {
    let report = lint(
        "concept base \"Base\"
         concept mid \"Mid\" { requires: base }
         concept top \"Top\" { requires: mid, base }",
    );
    assert_eq!(codes(&report), ["E102"]);
    assert_eq!(report[0].nodes, ["top", "base"]);
    assert!(report[0].message.contains("`mid`"));
}

#[test]
fn long_implied_paths_also_make_an_edge_redundant() {
    let report = lint(
        "concept a \"A\"
         concept b \"B\" { requires: a }
         concept c \"C\" { requires: b }
         concept d \"D\" { requires: c, a }",
    );
    assert_eq!(codes(&report), ["E102"]);
    assert_eq!(report[0].nodes, ["d", "a"]);
}

#[test]
fn diamonds_without_a_shortcut_are_fine() {
    // `e` keeps the two middle concepts from having identical dependents,
    // so only the (absent) shortcut edge could be reported.
    let report = lint(
        "concept a \"A\"
         concept b \"B\" { requires: a }
         concept c \"C\" { requires: a }
         concept d \"D\" { requires: b, c }
         concept e \"E\" { requires: b }",
    );
    assert!(report.is_empty(), "{report:?}");
}

#[test]
fn single_use_concepts_are_flagged() {
    let report = lint(
        "concept unit \"Unit\"
         skill convert \"Convert units\" { uses: unit }",
    );
    assert_eq!(codes(&report), ["E103"]);
    assert_eq!(report[0].nodes, ["unit", "convert"]);
}

#[test]
fn concepts_with_two_users_or_concept_users_are_kept() {
    // Two skills share the concept: fine.
    let report = lint(
        "concept unit \"Unit\"
         skill convert \"Convert\" { uses: unit }
         skill compare \"Compare\" { uses: unit }",
    );
    assert!(!report.iter().any(|d| d.code == "E103"), "{report:?}");

    // A single user that is another concept is not the E103 pattern.
    let report = lint(
        "concept unit \"Unit\"
         concept rate \"Rate\" { requires: unit }",
    );
    assert!(!report.iter().any(|d| d.code == "E103"), "{report:?}");
}

#[test]
fn concepts_with_identical_dependents_are_flagged_once_per_pair() {
    let report = lint(
        "concept ratio \"Ratio\"
         concept proportion \"Proportion\"
         skill scale \"Scale\" { uses: ratio, proportion }
         skill mix \"Mix\" { uses: ratio, proportion }",
    );
    assert_eq!(codes(&report), ["E104"]);
    assert_eq!(report[0].nodes, ["proportion", "ratio"]);
}

#[test]
fn different_dependents_and_unused_concepts_are_not_equivalent() {
    let report = lint(
        "concept ratio \"Ratio\"
         concept proportion \"Proportion\"
         concept ghost_one \"Ghost\"
         concept ghost_two \"Ghost\"
         skill scale \"Scale\" { uses: ratio, proportion }
         skill mix \"Mix\" { uses: ratio }",
    );
    assert!(!report.iter().any(|d| d.code == "E104"), "{report:?}");
}

#[test]
fn loose_ends_need_a_course_and_respect_the_intentional_tag() {
    let graph_src = "skill goal_skill \"Goal\" { requires: step }
         skill step \"Step\"
         skill stray \"Stray\"";
    let course = "\ncourse \"C\" { goal: goal_skill }";

    // Without a course the rule stays quiet.
    let report = lint(graph_src);
    assert!(!report.iter().any(|d| d.code == "E105"), "{report:?}");

    // With one, the stray skill is a loose end...
    let report = lint(&format!("{graph_src}{course}"));
    let loose: Vec<_> = report.iter().filter(|d| d.code == "E105").collect();
    assert_eq!(loose.len(), 1);
    assert_eq!(loose[0].nodes, ["stray"]);

    // ...unless it is tagged as intentional.
    let tagged =
        graph_src.replace("skill stray \"Stray\"", "skill stray \"Stray\" { tags: intentional }");
    let report = lint(&format!("{tagged}{course}"));
    assert!(!report.iter().any(|d| d.code == "E105"), "{report:?}");
}

#[test]
fn goals_and_declared_prerequisites_are_not_loose_ends() {
    let report = lint(
        "skill a \"A\"
         skill b \"B\"
         course \"C\" { goal: a
             prerequisite: b }",
    );
    assert!(!report.iter().any(|d| d.code == "E105"), "{report:?}");
}

#[test]
fn concept_goals_are_rejected() {
    let report = lint(
        "concept theory \"Theory\"
         skill apply \"Apply\" { uses: theory }
         course \"C\" { goal: apply, theory }",
    );
    let concept_goals: Vec<_> = report.iter().filter(|d| d.code == "E106").collect();
    assert_eq!(concept_goals.len(), 1);
    assert_eq!(concept_goals[0].nodes, ["theory"]);
}

#[test]
fn too_many_subskills_warns_above_the_limit_only() {
    let five = "skill parent \"P\" { requires: s1, s2, s3, s4, s5 }
         skill s1 \"1\"\nskill s2 \"2\"\nskill s3 \"3\"\nskill s4 \"4\"\nskill s5 \"5\"";
    let report = lint(five);
    assert!(!report.iter().any(|d| d.code == "W201"), "{report:?}");

    let six = five.replace("s5 }", "s5, s6 }") + "\nskill s6 \"6\"";
    let report = lint(&six);
    let crowded: Vec<_> = report.iter().filter(|d| d.code == "W201").collect();
    assert_eq!(crowded.len(), 1);
    assert!(crowded[0].message.contains("6 direct subskills"));

    // A smaller configured limit makes the five-subskill version fire too.
    let (graph, courses) = compile(five);
    let config = LintConfig { max_subskills: 4, ..LintConfig::default() };
    let report = lint_graph(&graph, &courses, &config);
    assert!(report.iter().any(|d| d.code == "W201"), "{report:?}");
}

#[test]
fn skills_in_contents_without_exercises_warn() {
    let report = lint(
        "skill solve \"Solve\" { requires: rearrange }
         skill rearrange \"Rearrange\"
         exercise drill \"Drill\" { tests: rearrange }
         course \"C\" { goal: solve }",
    );
    let untested: Vec<_> = report.iter().filter(|d| d.code == "W202").collect();
    assert_eq!(untested.len(), 1);
    assert_eq!(untested[0].nodes, ["solve"]);
}

#[test]
fn covered_attestations_and_out_of_content_skills_silence_w202() {
    let report = lint(
        "skill solve \"Solve\" { requires: rearrange
             covered }
         skill rearrange \"Rearrange\"
         skill unrelated \"Unrelated\" { tags: intentional }
         exercise drill \"Drill\" { tests: rearrange }
         course \"C\" { goal: solve }",
    );
    assert!(!report.iter().any(|d| d.code == "W202"), "{report:?}");
}

#[test]
fn exercises_testing_outside_every_course_warn() {
    let report = lint(
        "skill taught \"Taught\"
         skill assumed \"Assumed\" { tags: intentional }
         skill beyond \"Beyond\" { tags: intentional
             covered }
         exercise ok \"Ok\" { tests: taught, assumed }
         exercise stray \"Stray\" { tests: beyond }
         course \"C\" { goal: taught
             prerequisite: assumed }",
    );
    let out_of_scope: Vec<_> = report.iter().filter(|d| d.code == "W203").collect();
    assert_eq!(out_of_scope.len(), 1);
    assert_eq!(out_of_scope[0].nodes, ["beyond"]);
}

#[test]
fn covered_attestation_rule_is_opt_in() {
    let src = "skill whole \"Whole\" { requires: part }
         skill part \"Part\"";
    let report = lint(src);
    assert!(!report.iter().any(|d| d.code == "W204"), "{report:?}");

    let (graph, courses) = compile(src);
    let config = LintConfig {
        enabled_overrides: BTreeMap::from([("W204".to_string(), true)]),
        ..LintConfig::default()
    };
    let report = lint_graph(&graph, &courses, &config);
    let unattested: Vec<_> = report.iter().filter(|d| d.code == "W204").collect();
    assert_eq!(unattested.len(), 1);
    assert_eq!(unattested[0].nodes, ["whole"]);
}

#[test]
fn severity_overrides_change_reporting_not_detection() {
    let src = "concept unit \"Unit\"
         skill convert \"Convert\" { uses: unit }";
    let (graph, courses) = compile(src);
    let config = LintConfig {
        severity_overrides: BTreeMap::from([("E103".to_string(), Severity::Warning)]),
        ..LintConfig::default()
    };
    let report = lint_graph(&graph, &courses, &config);
    assert_eq!(codes(&report), ["E103"]);
    assert_eq!(report[0].severity, Severity::Warning);

    let config = LintConfig {
        enabled_overrides: BTreeMap::from([("E103".to_string(), false)]),
        ..LintConfig::default()
    };
    assert!(lint_graph(&graph, &courses, &config).is_empty());
}

#[test]
fn reports_come_out_sorted_by_code_then_node() {
    let report = lint(
        "concept zeta \"Z\"
         concept alpha \"A\"
         skill use_zeta \"UZ\" { uses: zeta }
         skill use_alpha \"UA\" { uses: alpha }",
    );
    assert_eq!(codes(&report), ["E103", "E103"]);
    assert_eq!(report[0].nodes[0], "alpha");
    assert_eq!(report[1].nodes[0], "zeta");
}

// ----- sequence rules ----------------------------------------------------

/// Three-skill chain: `top` requires `mid` requires `base`.
const CHAIN: &str = "skill top \"Top\" { requires: mid }
    skill mid \"Mid\" { requires: base }
    skill base \"Base\"
    course \"C\" { goal: top }";

fn audit(src: &str, sequence: &[&str]) -> Vec<Diagnostic> {
    let (graph, courses) = compile(src);
    check_sequence(&graph, &courses[0], sequence, &LintConfig::default())
}

#[test]
fn a_depth_first_order_is_clean() {
    assert!(audit(CHAIN, &["base", "mid", "top"]).is_empty());
}

#[test]
fn an_item_before_its_prerequisite_is_flagged() {
    let report = audit(CHAIN, &["mid", "base", "top"]);
    let inversions: Vec<_> = report.iter().filter(|d| d.code == "E301").collect();
    assert_eq!(inversions.len(), 1);
    assert_eq!(inversions[0].nodes, ["mid", "base"]);
    // No other error-severity rule fires for this instance.
    assert!(report.iter().filter(|d| d.is_error()).all(|d| d.code == "E301"));
}

#[test]
fn teaching_a_skill_without_its_subskill_is_mixing() {
    let report = audit(CHAIN, &["top", "base"]);
    assert!(report.iter().any(|d| d.code == "E302" && d.nodes == ["top", "mid"]));
    // `mid` is already explained by E302, so it is not also "omitted".
    assert!(!report.iter().any(|d| d.code == "E303"));
}

#[test]
fn omissions_that_are_not_mixing_are_incomplete() {
    let report = audit(CHAIN, &["base", "mid"]);
    let omitted: Vec<_> = report.iter().filter(|d| d.is_error()).collect();
    assert_eq!(codes(&report), ["E303"]);
    assert_eq!(omitted[0].nodes, ["top"]);
}

#[test]
fn extraneous_and_repeated_items_are_flagged() {
    let src = "skill top \"Top\" { requires: mid }
        skill mid \"Mid\" { requires: base }
        skill base \"Base\"
        skill elsewhere \"Elsewhere\" { tags: intentional }
        course \"C\" { goal: top }";
    let report = audit(src, &["base", "mid", "top", "elsewhere"]);
    assert_eq!(codes(&report), ["E304"]);
    assert_eq!(report[0].nodes, ["elsewhere"]);
    assert!(report[0].message.contains("not part of the course contents"));

    let report = audit(CHAIN, &["base", "base", "mid", "top"]);
    assert_eq!(codes(&report), ["E304"]);
    assert!(report[0].message.contains("more than once"));
}

#[test]
fn unknown_sequence_items_are_unresolved_references() {
    let report = audit(CHAIN, &["base", "ghost", "mid", "top"]);
    assert_eq!(codes(&report), ["E012"]);
    assert_eq!(report[0].nodes, ["ghost"]);
}

#[test]
fn scattered_prerequisites_warn_even_when_the_order_is_legal() {
    let src = "skill summit \"Summit\" { requires: near, far }
        skill near \"Near\"
        skill far \"Far\" { requires: base }
        skill base \"Base\"
        course \"C\" { goal: summit }";
    // `far` is separated from `base` by `near`: legal, but not depth-first.
    let report = audit(src, &["base", "near", "far", "summit"]);
    assert_eq!(codes(&report), ["W301"]);
    assert_eq!(report[0].nodes, ["far"]);

    // The depth-first order is clean.
    assert!(audit(src, &["base", "far", "near", "summit"]).is_empty());
}

#[test]
fn concepts_scheduled_before_subskills_warn() {
    let src = "skill solve \"Solve\" { requires: rearrange
            uses: equation }
        skill rearrange \"Rearrange\"
        concept equation \"Equation\"
        course \"C\" { goal: solve }";
    let report = audit(src, &["equation", "rearrange", "solve"]);
    assert_eq!(codes(&report), ["W302"]);
    assert_eq!(report[0].nodes, ["solve", "equation"]);

    assert!(audit(src, &["rearrange", "equation", "solve"]).is_empty());
}

#[test]
fn sequence_reports_are_sorted_by_code() {
    let report = audit(CHAIN, &["mid", "top"]);
    let only_codes = codes(&report);
    let mut sorted = only_codes.clone();
    sorted.sort_unstable();
    assert_eq!(only_codes, sorted);
}
