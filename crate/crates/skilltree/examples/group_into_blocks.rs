//! Group a teaching order into exam-sized blocks.
//!
//! Each block ends at a goal skill whose prerequisites make up the rest of
//! the block, so every block closes with something testable. Goals can be
//! declared in the course, passed explicitly, or picked automatically.
//!
//! Run with: `cargo run --example group_into_blocks`

use std::path::Path;

use skilltree::blocks::{auto_select_goals, balance_metrics, group_blocks, rebalance};
use skilltree::lint::LintConfig;
use skilltree::plan::{plan_order, PlannerOptions};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/ladder.ctdl");
    let source = std::fs::read_to_string(&path).expect("fixture exists");
    let curriculum = skilltree::compile(&source, "ladder.ctdl").expect("fixture is valid");
    let graph = &curriculum.graph;
    let course = &curriculum.courses[0];
    let sequence =
        plan_order(graph, course, &PlannerOptions::default()).expect("course has content");

    // The course declares its block goals, so grouping just slices the
    // sequence at each goal.
    let declared = group_blocks(graph, &sequence, &course.declared_block_goals)
        .expect("declared goals are consistent");
    println!("blocks from the declared goals:");
    for block in &declared.blocks {
        let members: Vec<&str> = block.members.iter().map(|m| m.as_str()).collect();
        println!("  block {} (goal {}): {}", block.number, block.goal, members.join(", "));
    }

    let config = LintConfig::default();
    let (metrics, findings) = balance_metrics(&declared, &config);
    println!(
        "  sizes: min {}, max {}, mean {:.1}, ratio {:.2}; {} balance finding(s)",
        metrics.min,
        metrics.max,
        metrics.mean,
        metrics.ratio,
        findings.len()
    );

    // Without declared goals, goals are picked so block sizes stay inside
    // the configured bounds, and a too-small trailing block is merged into
    // its predecessor.
    let goals = auto_select_goals(graph, &sequence, config.min_block_size, config.max_block_size)
        .expect("sequence ends in a skill");
    let automatic = rebalance(
        group_blocks(graph, &sequence, &goals).expect("chosen goals are consistent"),
        config.min_block_size,
    );
    let chosen: Vec<&str> = goals.iter().map(|g| g.as_str()).collect();
    println!("\nautomatically chosen goals: {}", chosen.join(", "));
    for block in &automatic.blocks {
        let members: Vec<&str> = block.members.iter().map(|m| m.as_str()).collect();
        println!("  block {} (goal {}): {}", block.number, block.goal, members.join(", "));
    }
}
