//! Tour of the lint rule catalog.
//!
//! Prints every rule the linter knows, then runs a deliberately messy
//! curriculum through it to show a spread of findings, and finally shows
//! how configuration changes the report.
//!
//! Run with: `cargo run --example lint_catalog_tour`

use skilltree::diag::catalog;
use skilltree::lint::{lint_graph, LintConfig};

// Packs several design smells into one valid file: a redundant subconcept
// edge, single-use concepts, an equivalent-concept pair, a loose end (plus
// one silenced with the `intentional` tag), a skill with too many
// subskills, and an exercise testing material outside the course.
const MESSY: &str = r#"
concept fraction "Fraction"
concept ratio "Ratio" { requires: fraction }
concept percentage "Percentage" { requires: fraction, ratio }
concept vat "VAT"
concept sales_tax "Sales tax"
concept tax "Tax brackets"

skill price "Price an item" { uses: vat, sales_tax, percentage }
skill file_return "File a tax return" {
    requires: add, subtract, multiply, divide, round, estimate
    uses: tax
}
skill add "Add"
skill subtract "Subtract"
skill multiply "Multiply"
skill divide "Divide"
skill round "Round"
skill estimate "Estimate"
skill budget "Draw up a budget" {
    requires: add, round
    uses: vat, sales_tax
    tags: intentional
}

exercise ex_return "Fill in a mock return" { tests: file_return }
exercise ex_drill "Arithmetic drill" {
    tests: add, subtract, multiply, divide, round, estimate
}
exercise ex_budget "Balance a monthly budget" { tests: budget }

course "Money" { goal: file_return }
"#;

fn main() {
    println!("rule catalog:");
    for rule in catalog::RULES {
        println!(
            "  {} {:<28} {:<7} {}",
            rule.code,
            rule.name,
            rule.severity.to_string(),
            if rule.enabled_by_default { "on" } else { "off" }
        );
    }

    let curriculum = skilltree::compile(MESSY, "messy.ctdl").expect("messy but structurally valid");
    let findings = lint_graph(&curriculum.graph, &curriculum.courses, &LintConfig::default());
    println!("\nfindings with the default configuration:");
    for finding in &findings {
        println!("  {finding}");
    }

    // Every rule can be switched off (or on) and re-leveled.
    let mut relaxed = LintConfig::default();
    relaxed.enabled_overrides.insert("E103".into(), false);
    let fewer = lint_graph(&curriculum.graph, &curriculum.courses, &relaxed);
    println!(
        "\nwith E103 (single-use-concept) disabled: {} findings instead of {}",
        fewer.len(),
        findings.len()
    );
}
