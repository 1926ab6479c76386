//! Renders a block plan as a human-readable Markdown handout.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::blocks::BlockPlan;
use crate::graph::{CurriculumGraph, NodeKind};

/// One section per block, with the block's goal in the heading and a
/// numbered list of members in teaching order. Skills additionally list
/// which exercises test them, flagging untested skills with "no exercises".
pub fn to_markdown_plan(graph: &CurriculumGraph, plan: &BlockPlan) -> String {
    // Exercise ids per tested node, sorted by the BTree ordering.
    let mut tested_by: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for exercise in graph.exercises() {
        for node in &exercise.tests {
            tested_by.entry(node.as_str()).or_default().push(exercise.id.as_str());
        }
    }
    for ids in tested_by.values_mut() {
        ids.sort_unstable();
    }

    let mut out = String::new();
    writeln!(out, "# Block plan: {}", plan.course).unwrap();
    for block in &plan.blocks {
        let goal = graph.node(block.goal.as_str()).expect("goal in graph");
        writeln!(out, "\n## Block {} — {}", block.number, goal.title).unwrap();
        writeln!(out).unwrap();
        for (position, member) in block.members.iter().enumerate() {
            let node = graph.node(member.as_str()).expect("member in graph");
            let label = match node.kind {
                NodeKind::Skill => "skill",
                NodeKind::Concept => "concept",
            };
            write!(out, "{}. [{label}] {} (`{}`)", position + 1, node.title, node.id).unwrap();
            if node.kind == NodeKind::Skill {
                match tested_by.get(member.as_str()) {
                    Some(ids) => write!(out, " — exercises: {}", ids.join(", ")).unwrap(),
                    None => write!(out, " — no exercises").unwrap(),
                }
            }
            writeln!(out).unwrap();
        }
    }
    out
}
