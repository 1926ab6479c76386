//! Export a graph to the versioned JSON format and read it back.
//!
//! The JSON document embeds a schema version and a document kind, emits
//! keys sorted so output is byte-stable, and the importer re-validates
//! everything it reads, so hand-edited documents cannot smuggle in a
//! broken graph.
//!
//! Run with: `cargo run --example json_round_trip`

use std::path::Path;

use skilltree::export::{from_json, graph_to_json};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/linear_equation.ctdl");
    let source = std::fs::read_to_string(&path).expect("fixture exists");
    let curriculum = skilltree::compile(&source, "linear_equation.ctdl").expect("fixture is valid");

    let document = graph_to_json(&curriculum.graph, &curriculum.courses);
    let preview: String = document.lines().take(12).collect::<Vec<_>>().join("\n");
    println!("{preview}\n  ...\n");

    let (imported, courses) = from_json(&document).expect("own export re-imports");
    assert!(curriculum.graph.structural_eq(&imported));
    assert_eq!(curriculum.courses, courses);
    println!("round trip preserved the graph structurally");

    // The importer rejects anything it does not understand outright.
    let tampered = document.replace("\"version\": 1", "\"version\": 99");
    let error = from_json(&tampered).unwrap_err();
    println!("tampered version refused: {error}");
}
