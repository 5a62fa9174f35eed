//! Writes the canonical AS surrogate graph as an edge list.
//!
//! `cargo run -p netheal --example export_as_surrogate -- data/as_surrogate_512.txt`

use std::fs::File;
use std::io::BufWriter;

use netheal::topology::{as_surrogate, write_edge_list, AS_SURROGATE_SEED};

fn main() -> std::io::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "as_surrogate_512.txt".into());
    let g = as_surrogate();
    let header = [
        "synthetic AS-like topology (preferential attachment with triad formation)".to_string(),
        format!("generator seed {AS_SURROGATE_SEED}"),
        format!("nodes {} edges {}", g.live_count(), g.edge_count()),
    ];
    write_edge_list(&g, &header, BufWriter::new(File::create(&path)?))?;
    eprintln!("wrote {path}");
    Ok(())
}
