//! Compile a curriculum file and lint it, printing every finding.
//!
//! Run with: `cargo run --example validate_curriculum`

use std::path::Path;

use skilltree::lint::{lint_graph, LintConfig};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/linear_equation.ctdl");
    let source = std::fs::read_to_string(&path).expect("fixture exists");

    // `compile` parses the text and validates the graph structure in one
    // step; structural problems come back as diagnostics.
    let curriculum = match skilltree::compile(&source, "linear_equation.ctdl") {
        Ok(curriculum) => curriculum,
        Err(diagnostics) => {
            for diagnostic in &diagnostics {
                eprintln!("{diagnostic}");
            }
            std::process::exit(1);
        }
    };
    println!(
        "compiled: {} nodes, {} edges, {} exercises, {} course(s)",
        curriculum.graph.node_count(),
        curriculum.graph.edge_count(),
        curriculum.graph.exercises().len(),
        curriculum.courses.len(),
    );

    // The linter checks the curriculum design rules. This fixture
    // deliberately leaves two skills without exercises, so expect two
    // W202 findings.
    let findings = lint_graph(&curriculum.graph, &curriculum.courses, &LintConfig::default());
    println!("\n{} finding(s):", findings.len());
    for finding in &findings {
        println!("  {finding}");
    }

    // Severities and rule sets are configurable; promoting W202 to an
    // error would make CI reject the gap instead of just noting it.
    let mut strict = LintConfig::default();
    strict.severity_overrides.insert("W202".into(), skilltree::diag::Severity::Error);
    let strict_findings = lint_graph(&curriculum.graph, &curriculum.courses, &strict);
    println!(
        "\nwith W202 promoted to an error, the report contains errors: {}",
        skilltree::diag::has_errors(&strict_findings)
    );
}
