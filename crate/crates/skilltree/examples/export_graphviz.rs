//! Render a curriculum as a Graphviz drawing.
//!
//! Skills are boxes, concepts are ellipses, course goals get a thick
//! border and material outside the course contents is dashed. Pipe the
//! output through `dot -Tsvg` to get a picture.
//!
//! Run with: `cargo run --example export_graphviz > curriculum.dot`

use std::path::Path;

use skilltree::export::{to_dot, DotOptions};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/linear_equation.ctdl");
    let source = std::fs::read_to_string(&path).expect("fixture exists");
    let curriculum = skilltree::compile(&source, "linear_equation.ctdl").expect("fixture is valid");

    // Styling is relative to a course: its goals stand out and everything
    // students are assumed to know already is dashed.
    let dot = to_dot(&curriculum.graph, curriculum.courses.first(), &DotOptions::default());
    print!("{dot}");

    eprintln!("# render with: cargo run --example export_graphviz | dot -Tsvg -o curriculum.svg");
}
