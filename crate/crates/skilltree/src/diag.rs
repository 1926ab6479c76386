//! Diagnostics shared by the parser, graph builder, linter and CLI.
//!
//! Every finding carries a stable code from [`catalog`], a severity, a
//! human-readable message, the node ids it concerns and, when the input came
//! from source text, a location. Rendering is line-oriented:
//!
//! ```text
//! error E102 course.ctdl:3:1 redundant subconcept edge [nodes: drink, liquid]
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

/// 1-based position in a source file.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourceLocation {
    pub file: String,
    pub line: u32,
    pub column: u32,
}

impl SourceLocation {
    pub fn new(file: impl Into<String>, line: u32, column: u32) -> Self {
        Self { file: file.into(), line, column }
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

/// A single finding. Ordering follows the deterministic report order:
/// code, then first node id, then location.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: &'static str,
    pub severity: Severity,
    pub message: String,
    /// Node ids involved, most significant first.
    pub nodes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<SourceLocation>,
}

impl Diagnostic {
    pub fn new(code: &'static str, severity: Severity, message: impl Into<String>) -> Self {
        Self { code, severity, message: message.into(), nodes: Vec::new(), location: None }
    }

    pub fn with_nodes(mut self, nodes: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.nodes = nodes.into_iter().map(Into::into).collect();
        self
    }

    pub fn at(mut self, location: impl Into<Option<SourceLocation>>) -> Self {
        self.location = location.into();
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Key used to sort reports: (code, first node id, location).
    pub fn sort_key(&self) -> (&'static str, &str, Option<&SourceLocation>) {
        (self.code, self.nodes.first().map(String::as_str).unwrap_or(""), self.location.as_ref())
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.severity, self.code)?;
        if let Some(loc) = &self.location {
            write!(f, " {loc}")?;
        }
        write!(f, " {}", self.message)?;
        if !self.nodes.is_empty() {
            write!(f, " [nodes: {}]", self.nodes.join(", "))?;
        }
        Ok(())
    }
}

/// Sorts a report into its deterministic order.
pub fn sort_diagnostics(diagnostics: &mut [Diagnostic]) {
    diagnostics.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// The rule catalog. Graph-structure rules are E1xx/W2xx, sequence rules
/// E3xx/W3xx, block balance W4xx. E0xx/W0xx are reserved for parse and
/// build failures so that everything the tool reports has a stable code.
pub mod catalog {
    use super::Severity;

    pub struct Rule {
        pub code: &'static str,
        pub name: &'static str,
        pub severity: Severity,
        /// Rules that exist in the catalog but are not checked unless
        /// explicitly enabled.
        pub enabled_by_default: bool,
    }

    // Parse and build stages.
    pub const E001: &str = "E001"; // lex error
    pub const E002: &str = "E002"; // syntax error
    pub const W001: &str = "W001"; // duplicate edge fact
    pub const E011: &str = "E011"; // duplicate id
    pub const E012: &str = "E012"; // unresolved reference
    pub const E013: &str = "E013"; // edge-kind violation
    pub const E014: &str = "E014"; // dependency cycle
    pub const E015: &str = "E015"; // invalid declaration

    // Graph rules.
    pub const E101: &str = "E101"; // concept requires skill
    pub const E102: &str = "E102"; // redundant subconcept edge
    pub const E103: &str = "E103"; // single-use concept
    pub const E104: &str = "E104"; // equivalent concepts
    pub const E105: &str = "E105"; // loose end
    pub const E106: &str = "E106"; // concept as goal
    pub const W201: &str = "W201"; // too many subskills
    pub const W202: &str = "W202"; // skill without exercise
    pub const W203: &str = "W203"; // exercise tests out of scope
    pub const W204: &str = "W204"; // uncovered attestation

    // Sequence rules.
    pub const E301: &str = "E301"; // ordering inconsistency
    pub const E302: &str = "E302"; // mixing
    pub const E303: &str = "E303"; // incomplete sequence
    pub const E304: &str = "E304"; // extraneous item
    pub const W301: &str = "W301"; // non-dfs contiguity
    pub const W302: &str = "W302"; // concepts before subskills

    // Block rules.
    pub const W401: &str = "W401"; // unbalanced blocks

    pub const RULES: &[Rule] = &[
        Rule { code: E001, name: "lex-error", severity: Severity::Error, enabled_by_default: true },
        Rule {
            code: E002,
            name: "syntax-error",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: W001,
            name: "duplicate-edge",
            severity: Severity::Warning,
            enabled_by_default: true,
        },
        Rule {
            code: E011,
            name: "duplicate-id",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: E012,
            name: "unresolved-reference",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: E013,
            name: "edge-kind-violation",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: E014,
            name: "dependency-cycle",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: E015,
            name: "invalid-declaration",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: E101,
            name: "concept-requires-skill",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: E102,
            name: "redundant-subconcept-edge",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: E103,
            name: "single-use-concept",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: E104,
            name: "equivalent-concepts",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule { code: E105, name: "loose-end", severity: Severity::Error, enabled_by_default: true },
        Rule {
            code: E106,
            name: "concept-as-goal",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: W201,
            name: "too-many-subskills",
            severity: Severity::Warning,
            enabled_by_default: true,
        },
        Rule {
            code: W202,
            name: "skill-without-exercise",
            severity: Severity::Warning,
            enabled_by_default: true,
        },
        Rule {
            code: W203,
            name: "exercise-tests-out-of-scope",
            severity: Severity::Warning,
            enabled_by_default: true,
        },
        Rule {
            code: W204,
            name: "uncovered-attestation",
            severity: Severity::Warning,
            enabled_by_default: false,
        },
        Rule {
            code: E301,
            name: "ordering-inconsistency",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule { code: E302, name: "mixing", severity: Severity::Error, enabled_by_default: true },
        Rule {
            code: E303,
            name: "incomplete-sequence",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: E304,
            name: "extraneous-item",
            severity: Severity::Error,
            enabled_by_default: true,
        },
        Rule {
            code: W301,
            name: "non-dfs-contiguity",
            severity: Severity::Warning,
            enabled_by_default: true,
        },
        Rule {
            code: W302,
            name: "concepts-before-subskills",
            severity: Severity::Warning,
            enabled_by_default: true,
        },
        Rule {
            code: W401,
            name: "unbalanced-blocks",
            severity: Severity::Warning,
            enabled_by_default: true,
        },
    ];

    pub fn lookup(code: &str) -> Option<&'static Rule> {
        RULES.iter().find(|r| r.code == code)
    }
}
