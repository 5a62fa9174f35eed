//! SNAP-style edge lists: `#` comments, one `u<ws>v` pair per line.

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// A loaded edge list. `external_ids[i]` is the file id that dense id `i`
/// stands for; dense ids follow ascending file ids.
#[derive(Clone, Debug)]
pub struct EdgeListGraph {
    pub graph: Graph,
    pub external_ids: Vec<u64>,
}

impl EdgeListGraph {
    pub fn external_id(&self, id: NodeId) -> Option<u64> {
        self.external_ids.get(id.index()).copied()
    }
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<EdgeListGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(&text, path)
}

/// Parses edge-list text. Reversed duplicates and self-loops are dropped;
/// columns after the second are ignored.
pub fn parse_edge_list(text: &str, origin: &Path) -> Result<EdgeListGraph> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse {
            path: PathBuf::from(origin),
            line: idx + 1,
            msg,
        };
        let mut fields = line.split_whitespace();
        let mut next_id = || -> Result<u64> {
            let tok = fields
                .next()
                .ok_or_else(|| parse_err("expected two node ids".into()))?;
            tok.parse::<u64>()
                .map_err(|e| parse_err(format!("bad node id `{tok}`: {e}")))
        };
        let a = next_id()?;
        let b = next_id()?;
        pairs.push((a, b));
    }

    let external_ids: Vec<u64> = pairs
        .iter()
        .flat_map(|(a, b)| [*a, *b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let dense = |ext: u64| external_ids.binary_search(&ext).expect("id collected") as u32;
    let graph = Graph::from_edges(
        external_ids.len(),
        pairs.iter().map(|(a, b)| (dense(*a), dense(*b))),
    )?;
    Ok(EdgeListGraph {
        graph,
        external_ids,
    })
}

/// Writes the live edges of `graph` as `u\tv` lines after an optional
/// `#`-prefixed header.
pub fn write_edge_list<W: Write>(graph: &Graph, header: &[String], mut out: W) -> io::Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    for (a, b) in graph.edges() {
        writeln!(out, "{a}\t{b}")?;
    }
    out.flush()
}
