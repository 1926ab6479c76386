//! Splits a teaching sequence into course blocks.
//!
//! A block is a contiguous run of the sequence that ends at its goal: the
//! skill the block works towards, with everything before it in the block
//! feeding that goal. Blocks can come from explicitly declared goals
//! ([`group_blocks`]) or be chosen automatically ([`auto_select_goals`]),
//! which aims for block sizes in a configured range while only ever closing
//! a block at a skill whose prerequisites cover the rest of the block —
//! otherwise a block would end on material its own goal does not explain.

use std::collections::HashMap;

use thiserror::Error;

use crate::diag::{catalog, sort_diagnostics, Diagnostic};
use crate::graph::{CurriculumGraph, NodeId, NodeKind};
use crate::lint::LintConfig;
use crate::plan::TeachingSequence;

/// One block of the course: `members` is the contiguous slice of the
/// teaching sequence, whose last element is always `goal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// 1-based position of the block within the course.
    pub number: usize,
    pub goal: NodeId,
    pub members: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPlan {
    pub course: String,
    pub blocks: Vec<Block>,
}

impl BlockPlan {
    pub fn goals(&self) -> Vec<&NodeId> {
        self.blocks.iter().map(|b| &b.goal).collect()
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("no block goals given and none declared")]
    NoGoals,
    #[error("`{id}` is not a node in the graph")]
    UnresolvedReference { id: String },
    #[error("block goal `{id}` is a concept; goals must be skills")]
    GoalNotSkill { id: String },
    #[error("block goal `{id}` is not part of the teaching sequence")]
    GoalNotInSequence { id: String },
    #[error("block goal `{id}` is listed more than once")]
    DuplicateGoal { id: String },
    #[error(
        "block goals must follow the teaching sequence: `{goal}` is taught before `{previous}`"
    )]
    GoalsOutOfOrder { goal: String, previous: String },
    #[error("the last block goal `{goal}` leaves {count} sequence item(s) unassigned after it")]
    TrailingUnassignedNodes { goal: String, count: usize },
    #[error("cannot pick block goals for an empty sequence")]
    EmptySequence,
    #[error(
        "the sequence ends with `{id}`, which is not a skill and so cannot close the final block"
    )]
    FinalItemNotSkill { id: String },
}

/// Cuts `sequence` into contiguous blocks, one per goal, each ending at its
/// goal. The goals must be skills, appear in the sequence in the order
/// given, and the last goal must be the sequence's final item so nothing is
/// left dangling.
pub fn group_blocks<S: AsRef<str>>(
    graph: &CurriculumGraph,
    sequence: &TeachingSequence,
    goals: &[S],
) -> Result<BlockPlan, GroupError> {
    if goals.is_empty() {
        return Err(GroupError::NoGoals);
    }
    let position: HashMap<&str, usize> =
        sequence.items.iter().enumerate().map(|(index, id)| (id.as_str(), index)).collect();

    let mut cuts: Vec<(usize, NodeId)> = Vec::with_capacity(goals.len());
    let mut previous: Option<(usize, &str)> = None;
    for goal in goals {
        let id = goal.as_ref();
        let node =
            graph.node(id).ok_or_else(|| GroupError::UnresolvedReference { id: id.to_string() })?;
        if node.kind != NodeKind::Skill {
            return Err(GroupError::GoalNotSkill { id: id.to_string() });
        }
        let &index =
            position.get(id).ok_or_else(|| GroupError::GoalNotInSequence { id: id.to_string() })?;
        if let Some((prev_index, prev_id)) = previous {
            if prev_id == id {
                return Err(GroupError::DuplicateGoal { id: id.to_string() });
            }
            if index <= prev_index {
                return Err(GroupError::GoalsOutOfOrder {
                    goal: id.to_string(),
                    previous: prev_id.to_string(),
                });
            }
        }
        previous = Some((index, id));
        cuts.push((index, node.id.clone()));
    }
    // Duplicates that are not adjacent surface as an order violation above;
    // adjacent ones as DuplicateGoal. Either way every pair is distinct now.
    let (last_index, last_goal) = cuts.last().expect("goals is non-empty");
    if *last_index != sequence.items.len() - 1 {
        return Err(GroupError::TrailingUnassignedNodes {
            goal: last_goal.to_string(),
            count: sequence.items.len() - 1 - last_index,
        });
    }

    let mut blocks = Vec::with_capacity(cuts.len());
    let mut start = 0;
    for (number, (end, goal)) in cuts.into_iter().enumerate() {
        blocks.push(Block {
            number: number + 1,
            goal,
            members: sequence.items[start..=end].to_vec(),
        });
        start = end + 1;
    }
    Ok(BlockPlan { course: sequence.course.clone(), blocks })
}

/// Picks block goals for a sequence that does not declare any.
///
/// Walks the sequence left to right. A position can close the current
/// block only if it holds a skill whose prerequisite closure contains
/// every other item of the block (a "valid" close point). Among those, the
/// first one giving at least a mid-sized block (midpoint of `min..=max`)
/// wins; if none appears within `max` items, the last valid point seen is
/// used even when the block ends up small, and if there was none at all
/// the block grows past `max` to the next valid point. The final item
/// always closes the last block.
pub fn auto_select_goals(
    graph: &CurriculumGraph,
    sequence: &TeachingSequence,
    min_size: usize,
    max_size: usize,
) -> Result<Vec<NodeId>, GroupError> {
    let items = &sequence.items;
    if items.is_empty() {
        return Err(GroupError::EmptySequence);
    }
    let last = items.last().expect("non-empty");
    let is_skill = |id: &NodeId| graph.node(id.as_str()).is_some_and(|n| n.kind == NodeKind::Skill);
    if !is_skill(last) {
        return Err(GroupError::FinalItemNotSkill { id: last.to_string() });
    }

    let target = min_size.midpoint(max_size);
    let valid_close = |start: usize, end: usize| -> bool {
        if !is_skill(&items[end]) {
            return false;
        }
        let Ok(closure) = graph.prerequisite_closure([items[end].as_str()]) else {
            return false;
        };
        items[start..end].iter().all(|item| closure.contains(item.as_str()))
    };

    let mut goals = Vec::new();
    let mut start = 0;
    while start < items.len() {
        let mut close = None;
        let mut fallback = None;
        for end in start..items.len() {
            let count = end - start + 1;
            if count > max_size {
                break;
            }
            if valid_close(start, end) {
                if count >= target {
                    close = Some(end);
                    break;
                }
                fallback = Some(end);
            }
        }
        let mut close = close.or(fallback);
        if close.is_none() {
            // No way to close within bounds; overshoot to the next valid
            // point. One always exists: every course goal ahead closes the
            // run of its own prerequisites.
            close = (start + max_size..items.len()).find(|&end| valid_close(start, end));
        }
        let end = close.expect("a course goal ahead always closes the block");
        goals.push(items[end].clone());
        start = end + 1;
    }
    Ok(goals)
}

/// Merges a too-small final block into its predecessor. Earlier blocks are
/// left alone: a small block in the middle reflects the declared goals,
/// but a tiny tail is usually just the remainder of the cut.
pub fn rebalance(mut plan: BlockPlan, min_size: usize) -> BlockPlan {
    if plan.blocks.len() >= 2 && plan.blocks.last().is_some_and(|b| b.members.len() < min_size) {
        let tail = plan.blocks.pop().expect("checked length");
        let previous = plan.blocks.last_mut().expect("checked length");
        previous.members.extend(tail.members);
        previous.goal = tail.goal;
    }
    plan
}

/// How evenly the blocks are sized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BalanceMetrics {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    /// Largest divided by smallest block size; 1.0 means perfectly even.
    pub ratio: f64,
}

/// Measures block sizes and reports one W401 for every block outside the
/// configured size range.
pub fn balance_metrics(plan: &BlockPlan, config: &LintConfig) -> (BalanceMetrics, Vec<Diagnostic>) {
    let sizes: Vec<usize> = plan.blocks.iter().map(|b| b.members.len()).collect();
    let min = sizes.iter().copied().min().unwrap_or(0);
    let max = sizes.iter().copied().max().unwrap_or(0);
    let total: usize = sizes.iter().sum();
    let mean = if sizes.is_empty() { 0.0 } else { total as f64 / sizes.len() as f64 };
    let ratio = if min == 0 { 0.0 } else { max as f64 / min as f64 };

    let mut diagnostics = Vec::new();
    if config.is_enabled(catalog::W401) {
        for block in &plan.blocks {
            let size = block.members.len();
            if size < config.min_block_size || size > config.max_block_size {
                diagnostics.push(
                    Diagnostic::new(
                        catalog::W401,
                        config.severity(catalog::W401),
                        format!(
                            "block {} (goal `{}`) has {size} item(s), outside the preferred {}..={}",
                            block.number, block.goal, config.min_block_size, config.max_block_size
                        ),
                    )
                    .with_nodes([block.goal.to_string()]),
                );
            }
        }
    }
    sort_diagnostics(&mut diagnostics);
    (BalanceMetrics { min, max, mean, ratio }, diagnostics)
}
