//! Derive the teaching order for a course.
//!
//! The planner walks the course contents depth-first from the goals,
//! teaching larger subtrees first and finishing one branch before starting
//! the next, so every skill is applied right after its prerequisites.
//!
//! Run with: `cargo run --example plan_teaching_order`

use std::path::Path;

use skilltree::plan::{plan_order, PlannerOptions, TieBreak};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/two_branch.ctdl");
    let source = std::fs::read_to_string(&path).expect("fixture exists");
    let curriculum = skilltree::compile(&source, "two_branch.ctdl").expect("fixture is valid");
    let course = &curriculum.courses[0];

    let order = plan_order(&curriculum.graph, course, &PlannerOptions::default())
        .expect("course has content");
    println!("course \"{}\" teaching order:", order.course);
    for (step, item) in order.items.iter().enumerate() {
        let node = curriculum.graph.node(item.as_str()).unwrap();
        println!("  {}. {} — {}", step + 1, node.id, node.title);
    }

    // Ties between equally-sized subtrees follow declaration order by
    // default; switch to lexicographic ids for source-independent output.
    let options = PlannerOptions { tie_break: TieBreak::IdLexicographic, ..Default::default() };
    let stable = plan_order(&curriculum.graph, course, &options).unwrap();
    let ids: Vec<&str> = stable.items.iter().map(|i| i.as_str()).collect();
    println!("\nwith lexicographic tie-breaking: {}", ids.join(", "));
}
