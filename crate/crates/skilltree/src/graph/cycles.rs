//! Cycle detection for the graph builder.
//!
//! The common case (an acyclic graph) is answered by a linear Kahn pass.
//! Only when that fails do we enumerate elementary cycles, Johnson-style,
//! stopping at a cap so adversarial inputs cannot blow up the error report.

use super::{Node, NodeId};

/// Kahn's algorithm: true when every node can be peeled off.
pub(super) fn is_acyclic(adjacency: &[Vec<usize>]) -> bool {
    let n = adjacency.len();
    let mut indegree = vec![0usize; n];
    for succs in adjacency {
        for &s in succs {
            indegree[s] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &s in &adjacency[v] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                queue.push(s);
            }
        }
    }
    seen == n
}

/// Enumerates up to `cap` elementary cycles, each rotated so its id sequence
/// is lexicographically smallest. Start vertices are visited in id order,
/// which makes the enumeration (and therefore the truncated report)
/// deterministic.
pub(super) fn elementary_cycles(
    adjacency: &[Vec<usize>],
    nodes: &[Node],
    cap: usize,
) -> Vec<Vec<NodeId>> {
    let n = adjacency.len();
    if cap == 0 || n == 0 {
        return Vec::new();
    }
    // rank = position in id order; Johnson's "vertices >= s" restriction
    // runs over this order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| nodes[a].id.cmp(&nodes[b].id));
    let mut rank = vec![0usize; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    let mut found: Vec<Vec<NodeId>> = Vec::new();
    for &start in &order {
        if found.len() >= cap {
            break;
        }
        let mut search = CycleSearch {
            adjacency,
            nodes,
            rank: &rank,
            min_rank: rank[start],
            start,
            blocked: vec![false; n],
            unblock_on: vec![Vec::new(); n],
            stack: Vec::new(),
            found: &mut found,
            cap,
        };
        search.circuit(start);
    }
    found
}

struct CycleSearch<'a> {
    adjacency: &'a [Vec<usize>],
    nodes: &'a [Node],
    rank: &'a [usize],
    min_rank: usize,
    start: usize,
    blocked: Vec<bool>,
    unblock_on: Vec<Vec<usize>>,
    stack: Vec<usize>,
    found: &'a mut Vec<Vec<NodeId>>,
    cap: usize,
}

impl CycleSearch<'_> {
    fn circuit(&mut self, v: usize) -> bool {
        let mut in_cycle = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for i in 0..self.adjacency[v].len() {
            let w = self.adjacency[v][i];
            if self.rank[w] < self.min_rank {
                continue;
            }
            if w == self.start {
                self.record();
                in_cycle = true;
                if self.found.len() >= self.cap {
                    self.stack.pop();
                    return true;
                }
            } else if !self.blocked[w] && self.circuit(w) {
                in_cycle = true;
                if self.found.len() >= self.cap {
                    self.stack.pop();
                    return true;
                }
            }
        }
        if in_cycle {
            self.unblock(v);
        } else {
            for i in 0..self.adjacency[v].len() {
                let w = self.adjacency[v][i];
                if self.rank[w] >= self.min_rank && !self.unblock_on[w].contains(&v) {
                    self.unblock_on[w].push(v);
                }
            }
        }
        self.stack.pop();
        in_cycle
    }

    fn unblock(&mut self, v: usize) {
        self.blocked[v] = false;
        let waiters = std::mem::take(&mut self.unblock_on[v]);
        for w in waiters {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }

    fn record(&mut self) {
        let ids: Vec<NodeId> = self.stack.iter().map(|&v| self.nodes[v].id.clone()).collect();
        self.found.push(smallest_rotation(ids));
    }
}

/// Rotates a cycle's id sequence to its lexicographically smallest form, so
/// the same cycle is always reported identically regardless of where the
/// search entered it.
fn smallest_rotation(ids: Vec<NodeId>) -> Vec<NodeId> {
    let n = ids.len();
    let mut best = 0;
    for candidate in 1..n {
        for offset in 0..n {
            let a = &ids[(candidate + offset) % n];
            let b = &ids[(best + offset) % n];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    best = candidate;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => continue,
            }
        }
    }
    (0..n).map(|i| ids[(best + i) % n].clone()).collect()
}
