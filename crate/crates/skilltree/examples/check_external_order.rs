//! Audit a hand-written teaching order against a course.
//!
//! Teachers often already have an order in mind; the checker verifies it
//! teaches everything (and nothing extra), never puts a skill before its
//! prerequisites, and points out softer issues like splitting related
//! material apart.
//!
//! Run with: `cargo run --example check_external_order`

use std::path::Path;

use skilltree::lint::{check_sequence, LintConfig};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let source = std::fs::read_to_string(dir.join("two_branch.ctdl")).expect("fixture exists");
    let curriculum = skilltree::compile(&source, "two_branch.ctdl").expect("fixture is valid");
    let graph = &curriculum.graph;
    let course = &curriculum.courses[0];
    let config = LintConfig::default();

    // A breadth-first habit: all elementary skills first. Nothing is
    // outright wrong, but students only apply d and e four steps later.
    let breadth_first = ["d", "e", "f", "g", "b", "c", "a"];
    println!("auditing {}:", breadth_first.join(", "));
    for finding in check_sequence(graph, course, &breadth_first, &config) {
        println!("  {finding}");
    }

    // Teaching b before its subskills is an error, and leaving g out
    // means the course goal can never be reached.
    let broken = ["b", "d", "e", "f", "c", "a"];
    println!("\nauditing {}:", broken.join(", "));
    for finding in check_sequence(graph, course, &broken, &config) {
        println!("  {finding}");
    }

    // The planner's own output always audits clean.
    let options = skilltree::plan::PlannerOptions::default();
    let planned = skilltree::plan::plan_order(graph, course, &options).unwrap();
    let findings = check_sequence(graph, course, &planned.items, &config);
    println!("\nthe planned order produces {} finding(s)", findings.len());
}
