//! Reading and writing graph files.
//!
//!     cargo run --example graph_file -- crates/core/graphs/two_junctions.json

use qgs::io;

fn main() -> qgs::error::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| format!("{}/graphs/two_junctions.json", env!("CARGO_MANIFEST_DIR")));
    let text = std::fs::read_to_string(&path).map_err(|e| qgs::error::Error::Parse(format!("{path}: {e}")))?;
    let g = io::parse_graph_file(&text)?;

    println!("{}: lambda' = {:.6}", path, g.lambda_prime());
    for (v, vert) in g.vertices().iter().enumerate() {
        println!("  vertex {} ({}), degree {}", vert.id, vert.kind, g.degree(v));
    }
    for e in g.edges() {
        let to = e.to.map(|t| g.vertices()[t].id.as_str()).unwrap_or("INF");
        println!("  edge {}: {} -> {to}, length {}", e.id, g.vertices()[e.from].id, e.length);
    }

    let again = io::parse_graph_file(&io::serialize_graph(&g))?;
    println!("round trip identical: {}", again == g);

    match io::parse_graph_file(&text.replacen("\"name\"", "\"profiles\": [], \"name\"", 1)) {
        Err(e) => println!("strict schema: {e}"),
        Ok(_) => println!("unexpectedly accepted an unknown key"),
    }
    Ok(())
}
