//! Serializers for graphs, sequences and block plans.
//!
//! Every exporter is deterministic: the same input produces byte-identical
//! output, so generated files can live under version control and diffs
//! mean something. Formats:
//!
//! * [`dot`] — Graphviz rendering of the dependency graph.
//! * [`json`] — versioned JSON documents, with a strict importer.
//! * [`ctdl`] — the source language itself, for round-tripping.
//! * [`markdown`] — a human-readable block plan.

pub mod ctdl;
pub mod dot;
pub mod json;
pub mod markdown;

pub use ctdl::export_ctdl;
pub use dot::{to_dot, DotOptions};
pub use json::{
    diagnostics_to_json, from_json, graph_to_json, plan_to_json, sequence_to_json, SchemaError,
};
pub use markdown::to_markdown_plan;

/// Escapes a string for double-quoted contexts (`"` and `\`), which both
/// the source language and DOT share.
fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out
}
