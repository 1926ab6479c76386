//! Reachability and size computations over the prerequisite relation.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use super::{CurriculumGraph, EdgeKind, NodeId, NodeKind};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown node id `{id}`")]
    UnresolvedReference { id: String },
}

impl CurriculumGraph {
    /// Everything reachable from `roots` by following prerequisite edges at
    /// least once. A root is excluded unless it is itself a prerequisite of
    /// another root (directly or transitively).
    pub fn prerequisite_closure<I, S>(&self, roots: I) -> Result<BTreeSet<NodeId>, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut queue = VecDeque::new();
        let mut enqueued = vec![false; self.node_count()];
        for root in roots {
            let root = root.as_ref();
            let index = self
                .node_index(root)
                .ok_or_else(|| GraphError::UnresolvedReference { id: root.to_owned() })?;
            // Seed with the direct prerequisites; the root itself stays out
            // unless some other root's expansion reaches it.
            for (p, _) in self.prerequisites_of(index) {
                if !enqueued[p] {
                    enqueued[p] = true;
                    queue.push_back(p);
                }
            }
        }
        let mut closure = BTreeSet::new();
        while let Some(v) = queue.pop_front() {
            closure.insert(self.node_at(v).id.clone());
            for (p, _) in self.prerequisites_of(v) {
                if !enqueued[p] {
                    enqueued[p] = true;
                    queue.push_back(p);
                }
            }
        }
        Ok(closure)
    }

    /// What a course actually teaches: the goals and everything they require,
    /// minus the declared prerequisites and everything those require.
    pub fn course_contents(
        &self,
        course: &super::CourseSpec,
    ) -> Result<BTreeSet<NodeId>, GraphError> {
        let mut contents = self.prerequisite_closure(&course.goals)?;
        for goal in &course.goals {
            contents.insert(goal.clone());
        }
        let assumed = self.prerequisite_closure(&course.prerequisites)?;
        for known in course.prerequisites.iter().chain(&assumed) {
            contents.remove(known.as_str());
        }
        Ok(contents)
    }

    /// Number of nodes the given node stands for within `scope`: its
    /// prerequisite closure intersected with the scope, plus one for the node
    /// itself. Drives the planner's big-subtrees-first ordering.
    pub fn subtree_size(&self, node: &str, scope: &BTreeSet<NodeId>) -> Result<usize, GraphError> {
        let closure = self.prerequisite_closure([node])?;
        Ok(closure.iter().filter(|n| scope.contains(n.as_str())).count() + 1)
    }

    /// Skills with no subskills: the atoms a student practices directly.
    /// Concept requirements do not count; a skill that only uses concepts is
    /// still elementary.
    pub fn elementary_skills(&self) -> BTreeSet<NodeId> {
        self.nodes()
            .iter()
            .enumerate()
            .filter(|(_, n)| n.kind == NodeKind::Skill)
            .filter(|(i, _)| self.prerequisites_of(*i).all(|(_, kind)| kind != EdgeKind::Subskill))
            .map(|(_, n)| n.id.clone())
            .collect()
    }

    /// Subtree sizes for every node at once, as needed when planning large
    /// graphs: a reachability-bitset sweep in dependency order instead of one
    /// BFS per node. `scope` masks which nodes may be counted; when
    /// `count_concepts` is false only skills in the closure count. The node
    /// itself always contributes 1.
    pub(crate) fn subtree_sizes_bulk(&self, scope: &[bool], count_concepts: bool) -> Vec<usize> {
        let n = self.node_count();
        let words = n.div_ceil(64);
        let mut reach = vec![0u64; n * words];
        let mut sizes = vec![0usize; n];

        // Visit prerequisites before dependents (post-order over the
        // acyclic prerequisite relation).
        let mut state = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            stack.push((start, 0));
            state[start] = 1;
            while let Some((v, next)) = stack.last().copied() {
                let prereqs = &self.outgoing[v];
                if next < prereqs.len() {
                    stack.last_mut().unwrap().1 += 1;
                    let p = self.index[self.edges[prereqs[next]].to.as_str()];
                    if state[p] == 0 {
                        state[p] = 1;
                        stack.push((p, 0));
                    }
                } else {
                    state[v] = 2;
                    order.push(v);
                    stack.pop();
                }
            }
        }

        let mut counted = vec![false; n];
        for (i, node) in self.nodes().iter().enumerate() {
            counted[i] = scope[i] && (count_concepts || node.kind == NodeKind::Skill);
        }
        for &v in &order {
            for (p, _) in self.prerequisites_of(v) {
                let (lo, hi) = (v * words, p * words);
                for w in 0..words {
                    let bits = reach[hi + w];
                    reach[lo + w] |= bits;
                }
                reach[lo + p / 64] |= 1u64 << (p % 64);
            }
            let mut count = 0usize;
            for w in 0..words {
                let mut bits = reach[v * words + w];
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    if counted[w * 64 + b] {
                        count += 1;
                    }
                    bits &= bits - 1;
                }
            }
            sizes[v] = count + 1;
        }
        sizes
    }
}
