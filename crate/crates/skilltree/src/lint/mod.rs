//! Structural checks for curriculum graphs and teaching sequences.
//!
//! [`lint_graph`] inspects a built graph (plus its courses) for modelling
//! smells: redundant or misdirected dependencies, concepts that pull their
//! weight poorly, goals of the wrong kind, and skills that lack exercises.
//! [`check_sequence`] audits an explicit teaching order against the graph,
//! catching items taught before their prerequisites, missing or extraneous
//! items, and orders that scatter a topic's prerequisites.
//!
//! Both return diagnostics sorted by (code, first node id, location) so
//! reports are stable across runs. [`LintConfig`] toggles rules on or off
//! and overrides their severity without changing what they detect.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::diag::{catalog, sort_diagnostics, Diagnostic, Severity, SourceLocation};
use crate::graph::{CourseSpec, CurriculumGraph, EdgeKind, NodeKind};

/// Which rules run and how loudly they complain.
///
/// Severity overrides change how a finding is reported, never whether the
/// rule runs; enabling and disabling is separate.
#[derive(Clone, Debug)]
pub struct LintConfig {
    /// Report these codes with a different severity.
    pub severity_overrides: BTreeMap<String, Severity>,
    /// Turn individual rules on or off, overriding the catalog default.
    pub enabled_overrides: BTreeMap<String, bool>,
    /// W201 fires on skills with more direct subskills than this.
    pub max_subskills: usize,
    /// Preferred block size range, used for goal selection and W401.
    pub min_block_size: usize,
    pub max_block_size: usize,
}

impl Default for LintConfig {
    fn default() -> Self {
        Self {
            severity_overrides: BTreeMap::new(),
            enabled_overrides: BTreeMap::new(),
            max_subskills: 5,
            min_block_size: 3,
            max_block_size: 6,
        }
    }
}

impl LintConfig {
    pub fn is_enabled(&self, code: &str) -> bool {
        if let Some(&enabled) = self.enabled_overrides.get(code) {
            return enabled;
        }
        catalog::lookup(code).is_none_or(|rule| rule.enabled_by_default)
    }

    pub fn severity(&self, code: &str) -> Severity {
        if let Some(&severity) = self.severity_overrides.get(code) {
            return severity;
        }
        catalog::lookup(code).map_or(Severity::Error, |rule| rule.severity)
    }

    /// Pushes a diagnostic unless the rule is disabled.
    fn emit(
        &self,
        out: &mut Vec<Diagnostic>,
        code: &'static str,
        message: String,
        nodes: Vec<String>,
        location: Option<SourceLocation>,
    ) {
        if self.is_enabled(code) {
            out.push(
                Diagnostic::new(code, self.severity(code), message).with_nodes(nodes).at(location),
            );
        }
    }
}

/// Tag that exempts a node from the loose-end rule (E105).
pub const INTENTIONAL_TAG: &str = "intentional";

/// Runs all graph-structure rules. `courses` provides the goal and
/// prerequisite context for the course-aware rules (E105, E106, W202,
/// W203); those that need a course are skipped when none is given.
///
/// Expects an acyclic graph, which [`crate::graph::build_graph`] guarantees.
pub fn lint_graph(
    graph: &CurriculumGraph,
    courses: &[CourseSpec],
    config: &LintConfig,
) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    check_concept_requires_skill(graph, config, &mut out);
    check_redundant_subconcept_edges(graph, config, &mut out);
    check_single_use_concepts(graph, config, &mut out);
    check_equivalent_concepts(graph, config, &mut out);
    check_loose_ends(graph, courses, config, &mut out);
    check_concept_goals(graph, courses, config, &mut out);
    check_subskill_counts(graph, config, &mut out);
    check_exercise_coverage(graph, courses, config, &mut out);
    check_exercise_scope(graph, courses, config, &mut out);
    check_covered_attestations(graph, config, &mut out);

    sort_diagnostics(&mut out);
    out
}

/// E101: a concept may never depend on a skill. The builder refuses such
/// edges, so this only ever fires on graphs assembled by other means, but
/// the rule stays so every invariant has exactly one reporting path.
fn check_concept_requires_skill(
    graph: &CurriculumGraph,
    config: &LintConfig,
    out: &mut Vec<Diagnostic>,
) {
    for edge in graph.edges() {
        let from = graph.node(edge.from.as_str());
        let to = graph.node(edge.to.as_str());
        if let (Some(from), Some(to)) = (from, to) {
            if from.kind == NodeKind::Concept && to.kind == NodeKind::Skill {
                config.emit(
                    out,
                    catalog::E101,
                    format!(
                        "concept `{}` depends on skill `{}`; knowledge cannot require ability",
                        edge.from, edge.to
                    ),
                    vec![edge.from.to_string(), edge.to.to_string()],
                    edge.location.clone(),
                );
            }
        }
    }
}

/// E102: a subconcept edge u -> v is redundant when some other direct
/// subconcept w of u already reaches v, i.e. the edge repeats what a longer
/// path says. Works on the subconcept subgraph only.
fn check_redundant_subconcept_edges(
    graph: &CurriculumGraph,
    config: &LintConfig,
    out: &mut Vec<Diagnostic>,
) {
    let n = graph.node_count();
    let words = n.div_ceil(64);
    if n == 0 {
        return;
    }

    // successors[u] = direct subconcept dependencies of u, in edge order.
    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for edge in graph.edges() {
        if edge.kind != EdgeKind::Subconcept {
            continue;
        }
        if let (Some(u), Some(v)) =
            (graph.node_index(edge.from.as_str()), graph.node_index(edge.to.as_str()))
        {
            successors[u].push(v);
        }
    }

    // closure[v] = v plus everything subconcept-reachable from v, as a
    // bitset. Filled in reverse topological order; nodes on a cycle (which
    // built graphs cannot contain) just keep their own bit and produce no
    // false positives.
    let mut closure = vec![0u64; n * words];
    for v in 0..n {
        closure[v * words + v / 64] |= 1 << (v % 64);
    }
    let mut pending: Vec<usize> = successors.iter().map(Vec::len).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&v| pending[v] == 0).collect();
    let mut head = 0;
    let mut order = Vec::with_capacity(n);
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        order.push(v);
        for edge in graph.incoming_edges(v) {
            if edge.kind != EdgeKind::Subconcept {
                continue;
            }
            if let Some(u) = graph.node_index(edge.from.as_str()) {
                pending[u] -= 1;
                if pending[u] == 0 {
                    queue.push(u);
                }
            }
        }
    }
    for &v in &order {
        for &w in &successors[v] {
            for word in 0..words {
                let bits = closure[w * words + word];
                closure[v * words + word] |= bits;
            }
        }
    }

    for (u, succs) in successors.iter().enumerate() {
        for &v in succs {
            let witness = succs
                .iter()
                .find(|&&w| w != v && closure[w * words + v / 64] & (1 << (v % 64)) != 0);
            if let Some(&w) = witness {
                let (u_id, v_id, w_id) = (
                    graph.node_at(u).id.clone(),
                    graph.node_at(v).id.clone(),
                    graph.node_at(w).id.clone(),
                );
                let location = graph
                    .outgoing_edges(u)
                    .find(|e| e.kind == EdgeKind::Subconcept && e.to == v_id)
                    .and_then(|e| e.location.clone());
                config.emit(
                    out,
                    catalog::E102,
                    format!(
                        "`{u_id}` requiring `{v_id}` is redundant: `{w_id}` already implies it"
                    ),
                    vec![u_id.into(), v_id.into()],
                    location,
                );
            }
        }
    }
}

/// E103: a concept whose only user in the whole graph is a single skill
/// adds a node without adding structure; fold it into the skill.
fn check_single_use_concepts(
    graph: &CurriculumGraph,
    config: &LintConfig,
    out: &mut Vec<Diagnostic>,
) {
    for (index, node) in graph.nodes().iter().enumerate() {
        if node.kind != NodeKind::Concept {
            continue;
        }
        let mut incoming = graph.incoming_edges(index);
        let (Some(only), None) = (incoming.next(), incoming.next()) else { continue };
        if only.kind == EdgeKind::ConceptRequirement {
            config.emit(
                out,
                catalog::E103,
                format!(
                    "concept `{}` is only used by skill `{}`; consider folding it into the skill",
                    node.id, only.from
                ),
                vec![node.id.to_string(), only.from.to_string()],
                node.location.clone(),
            );
        }
    }
}

/// E104: two concepts with exactly the same (non-empty) set of direct
/// dependents are probably one idea written twice.
fn check_equivalent_concepts(
    graph: &CurriculumGraph,
    config: &LintConfig,
    out: &mut Vec<Diagnostic>,
) {
    let mut by_dependents: BTreeMap<BTreeSet<&str>, Vec<&str>> = BTreeMap::new();
    for (index, node) in graph.nodes().iter().enumerate() {
        if node.kind != NodeKind::Concept {
            continue;
        }
        let dependents: BTreeSet<&str> =
            graph.incoming_edges(index).map(|e| e.from.as_str()).collect();
        if !dependents.is_empty() {
            by_dependents.entry(dependents).or_default().push(node.id.as_str());
        }
    }
    for group in by_dependents.values_mut() {
        group.sort_unstable();
        for (i, &a) in group.iter().enumerate() {
            for &b in &group[i + 1..] {
                let location = graph.node(a).and_then(|n| n.location.clone());
                config.emit(
                    out,
                    catalog::E104,
                    format!("concepts `{a}` and `{b}` have identical dependents; are they the same idea?"),
                    vec![a.to_string(), b.to_string()],
                    location,
                );
            }
        }
    }
}

/// E105: a node nothing depends on, that no course names as a goal or
/// prerequisite, leads nowhere. Tag it `intentional` to keep it anyway
/// (e.g. a stretch skill kept for next year's course). Needs at least one
/// course for goal context.
fn check_loose_ends(
    graph: &CurriculumGraph,
    courses: &[CourseSpec],
    config: &LintConfig,
    out: &mut Vec<Diagnostic>,
) {
    if courses.is_empty() {
        return;
    }
    let mut named: BTreeSet<&str> = BTreeSet::new();
    for course in courses {
        named.extend(course.goals.iter().map(|g| g.as_str()));
        named.extend(course.prerequisites.iter().map(|p| p.as_str()));
    }
    for (index, node) in graph.nodes().iter().enumerate() {
        if graph.incoming_edges(index).next().is_some()
            || named.contains(node.id.as_str())
            || node.tags.contains(INTENTIONAL_TAG)
        {
            continue;
        }
        config.emit(
            out,
            catalog::E105,
            format!(
                "`{}` has no dependents and no course names it as a goal or prerequisite; tag it `{INTENTIONAL_TAG}` if that is deliberate",
                node.id
            ),
            vec![node.id.to_string()],
            node.location.clone(),
        );
    }
}

/// E106: course goals must be skills. "Understanding X" is not something a
/// student can demonstrate; wrap the concept in a skill that applies it.
fn check_concept_goals(
    graph: &CurriculumGraph,
    courses: &[CourseSpec],
    config: &LintConfig,
    out: &mut Vec<Diagnostic>,
) {
    for course in courses {
        for goal in &course.goals {
            let Some(node) = graph.node(goal.as_str()) else { continue };
            if node.kind == NodeKind::Concept {
                config.emit(
                    out,
                    catalog::E106,
                    format!(
                        "course `{}` lists concept `{}` as a goal; goals must be skills",
                        course.name, goal
                    ),
                    vec![goal.to_string()],
                    node.location.clone(),
                );
            }
        }
    }
}

/// W201: a skill split into too many direct subskills is hard to teach as
/// one step; group some of them.
fn check_subskill_counts(graph: &CurriculumGraph, config: &LintConfig, out: &mut Vec<Diagnostic>) {
    for (index, node) in graph.nodes().iter().enumerate() {
        if node.kind != NodeKind::Skill {
            continue;
        }
        let subskills =
            graph.outgoing_edges(index).filter(|e| e.kind == EdgeKind::Subskill).count();
        if subskills > config.max_subskills {
            config.emit(
                out,
                catalog::W201,
                format!(
                    "skill `{}` has {subskills} direct subskills (limit {}); consider grouping them",
                    node.id, config.max_subskills
                ),
                vec![node.id.to_string()],
                node.location.clone(),
            );
        }
    }
}

/// W202: a skill that is part of some course's contents, has no exercise
/// testing it and carries no `covered` attestation cannot be practised.
fn check_exercise_coverage(
    graph: &CurriculumGraph,
    courses: &[CourseSpec],
    config: &LintConfig,
    out: &mut Vec<Diagnostic>,
) {
    let mut in_contents: BTreeSet<String> = BTreeSet::new();
    for course in courses {
        if let Ok(contents) = graph.course_contents(course) {
            in_contents.extend(contents.into_iter().map(Into::into));
        }
    }
    let tested: BTreeSet<&str> =
        graph.exercises().iter().flat_map(|e| e.tests.iter().map(|t| t.as_str())).collect();
    for id in &in_contents {
        let Some(node) = graph.node(id) else { continue };
        if node.kind == NodeKind::Skill && !tested.contains(id.as_str()) && !node.attested_covered {
            config.emit(
                out,
                catalog::W202,
                format!("skill `{id}` is part of the course contents but no exercise tests it"),
                vec![id.clone()],
                node.location.clone(),
            );
        }
    }
}

/// W203: an exercise testing a skill that no course teaches or assumes is
/// unreachable material. Needs at least one course for scope.
fn check_exercise_scope(
    graph: &CurriculumGraph,
    courses: &[CourseSpec],
    config: &LintConfig,
    out: &mut Vec<Diagnostic>,
) {
    if courses.is_empty() {
        return;
    }
    let mut scope: BTreeSet<String> = BTreeSet::new();
    for course in courses {
        if let Ok(contents) = graph.course_contents(course) {
            scope.extend(contents.into_iter().map(Into::into));
        }
        scope.extend(course.prerequisites.iter().map(|p| p.to_string()));
    }
    for exercise in graph.exercises() {
        for tested in &exercise.tests {
            if !scope.contains(tested.as_str()) {
                config.emit(
                    out,
                    catalog::W203,
                    format!(
                        "exercise `{}` tests `{tested}`, which no course teaches or assumes",
                        exercise.id
                    ),
                    vec![tested.to_string()],
                    exercise.location.clone(),
                );
            }
        }
    }
}

/// W204 (off by default): a non-elementary skill is normally practised
/// through its subskills, but that is a judgement call; this rule asks for
/// an explicit `covered` attestation on each one.
fn check_covered_attestations(
    graph: &CurriculumGraph,
    config: &LintConfig,
    out: &mut Vec<Diagnostic>,
) {
    for (index, node) in graph.nodes().iter().enumerate() {
        if node.kind != NodeKind::Skill || node.attested_covered {
            continue;
        }
        let non_elementary = graph.outgoing_edges(index).any(|e| e.kind == EdgeKind::Subskill);
        if non_elementary {
            config.emit(
                out,
                catalog::W204,
                format!("non-elementary skill `{}` has no `covered` attestation", node.id),
                vec![node.id.to_string()],
                node.location.clone(),
            );
        }
    }
}

/// Audits an explicit teaching order for a course against the graph.
///
/// `sequence` is the proposed order, earliest first. Positions used by the
/// checks refer to the deduplicated sequence of known items: unknown ids
/// are reported (E012) and skipped, repeated items count at their first
/// occurrence (and are reported via E304).
pub fn check_sequence<S: AsRef<str>>(
    graph: &CurriculumGraph,
    course: &CourseSpec,
    sequence: &[S],
    config: &LintConfig,
) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let contents = match graph.course_contents(course) {
        Ok(contents) => contents,
        Err(err) => {
            config.emit(&mut out, catalog::E012, err.to_string(), Vec::new(), None);
            return out;
        }
    };
    let contents: BTreeSet<&str> = contents.iter().map(|id| id.as_str()).collect();

    // First-occurrence position of each known item, plus the deduplicated
    // order itself.
    let mut position: HashMap<&str, usize> = HashMap::new();
    let mut items: Vec<&str> = Vec::new();
    let mut unknown: BTreeSet<&str> = BTreeSet::new();
    let mut repeated: BTreeSet<&str> = BTreeSet::new();
    for raw in sequence {
        let id = raw.as_ref();
        if !graph.contains(id) {
            unknown.insert(id);
            continue;
        }
        if position.contains_key(id) {
            repeated.insert(id);
            continue;
        }
        position.insert(id, items.len());
        items.push(id);
    }

    for id in unknown {
        config.emit(
            &mut out,
            catalog::E012,
            format!("`{id}` is not a node in the graph"),
            vec![id.to_string()],
            None,
        );
    }

    // E304: items outside the course contents, and items listed twice.
    for &id in &items {
        if !contents.contains(id) {
            config.emit(
                &mut out,
                catalog::E304,
                format!("`{id}` is not part of the course contents"),
                vec![id.to_string()],
                None,
            );
        }
    }
    for id in repeated {
        config.emit(
            &mut out,
            catalog::E304,
            format!("`{id}` appears more than once"),
            vec![id.to_string()],
            None,
        );
    }

    // E301: an item scheduled before one of its direct prerequisites.
    for &id in &items {
        let index = graph.node_index(id).expect("known item");
        for edge in graph.outgoing_edges(index) {
            if let Some(&prereq_pos) = position.get(edge.to.as_str()) {
                if prereq_pos > position[id] {
                    config.emit(
                        &mut out,
                        catalog::E301,
                        format!("`{id}` is scheduled before its prerequisite `{}`", edge.to),
                        vec![id.to_string(), edge.to.to_string()],
                        None,
                    );
                }
            }
        }
    }

    // E302: a scheduled skill whose in-content direct subskill never
    // appears; the sequence teaches the whole without its parts.
    let mut mixing_reported: BTreeSet<&str> = BTreeSet::new();
    for &id in &items {
        let index = graph.node_index(id).expect("known item");
        if graph.node_at(index).kind != NodeKind::Skill {
            continue;
        }
        for edge in graph.outgoing_edges(index) {
            let target = edge.to.as_str();
            if edge.kind == EdgeKind::Subskill
                && contents.contains(target)
                && !position.contains_key(target)
            {
                mixing_reported.insert(target);
                config.emit(
                    &mut out,
                    catalog::E302,
                    format!(
                        "`{id}` is taught but its subskill `{target}` is missing from the sequence"
                    ),
                    vec![id.to_string(), target.to_string()],
                    None,
                );
            }
        }
    }

    // E303: anything else the contents demand but the sequence omits.
    // Nodes already flagged by E302 are not reported twice.
    for &id in &contents {
        if !position.contains_key(id) && !mixing_reported.contains(id) {
            config.emit(
                &mut out,
                catalog::E303,
                format!("the course contents include `{id}` but the sequence omits it"),
                vec![id.to_string()],
                None,
            );
        }
    }

    // W301: a depth-first order finishes a topic's prerequisites in the
    // run directly before the topic itself; flag items whose scheduled
    // prerequisite closure is scattered instead.
    for &id in &items {
        let closure = match graph.prerequisite_closure([id]) {
            Ok(closure) => closure,
            Err(_) => continue,
        };
        let scheduled: BTreeSet<&str> = closure
            .iter()
            .map(|n| n.as_str())
            .filter(|n| contents.contains(n) && position.contains_key(n))
            .collect();
        if scheduled.is_empty() {
            continue;
        }
        let end = position[id];
        let contiguous = end >= scheduled.len()
            && items[end - scheduled.len()..end].iter().all(|n| scheduled.contains(n));
        if !contiguous {
            config.emit(
                &mut out,
                catalog::W301,
                format!("the prerequisites of `{id}` are not taught in one run directly before it"),
                vec![id.to_string()],
                None,
            );
        }
    }

    // W302: concepts serve a skill best right before the skill, after its
    // subskills are practised; flag skills whose concept comes earlier
    // than one of their subskills. Concepts that are themselves below one
    // of the subskills are exempt: those cannot be deferred.
    for &id in &items {
        let index = graph.node_index(id).expect("known item");
        if graph.node_at(index).kind != NodeKind::Skill {
            continue;
        }
        let subskill_targets: Vec<&str> = graph
            .outgoing_edges(index)
            .filter(|e| e.kind == EdgeKind::Subskill)
            .map(|e| e.to.as_str())
            .collect();
        let below_subskills = graph
            .prerequisite_closure(subskill_targets.iter().copied())
            .expect("targets are in the graph");
        let mut earliest_concept: Option<(usize, &str)> = None;
        let mut latest_subskill: Option<(usize, &str)> = None;
        for edge in graph.outgoing_edges(index) {
            let Some(&pos) = position.get(edge.to.as_str()) else { continue };
            match edge.kind {
                EdgeKind::ConceptRequirement => {
                    if below_subskills.contains(edge.to.as_str()) {
                        continue;
                    }
                    if earliest_concept.is_none_or(|(best, _)| pos < best) {
                        earliest_concept = Some((pos, edge.to.as_str()));
                    }
                }
                EdgeKind::Subskill => {
                    if latest_subskill.is_none_or(|(best, _)| pos > best) {
                        latest_subskill = Some((pos, edge.to.as_str()));
                    }
                }
                EdgeKind::Subconcept => {}
            }
        }
        if let (Some((concept_pos, concept)), Some((subskill_pos, subskill))) =
            (earliest_concept, latest_subskill)
        {
            if concept_pos < subskill_pos {
                config.emit(
                    &mut out,
                    catalog::W302,
                    format!(
                        "concept `{concept}` for skill `{id}` is introduced before its subskill `{subskill}` is practised"
                    ),
                    vec![id.to_string(), concept.to_string()],
                    None,
                );
            }
        }
    }

    sort_diagnostics(&mut out);
    out
}

#[cfg(test)]
mod tests;
