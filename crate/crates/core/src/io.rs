//! Edge-list readers and writers.
//!
//! Two input dialects are supported:
//! - `plain`: one `u v` pair of non-negative integers per line;
//! - `konect`: lines starting with `%` are comments, data lines are
//!   `u v [weight [timestamp]]` with 1-based ids (trailing fields ignored).
//!
//! External ids may be sparse; they are compacted to dense 0-based ids per
//! side (ascending external order) with translation tables kept alongside.

use crate::error::{parse_error, Error, Result};
use crate::graph::BipartiteGraph;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeListFormat {
    Plain,
    Konect,
}

/// A parsed graph plus the bookkeeping needed to talk about original ids.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: BipartiteGraph,
    /// External id of each dense U node.
    pub u_ids: Vec<u64>,
    /// External id of each dense V node.
    pub v_ids: Vec<u64>,
    pub duplicates_dropped: u64,
}

pub fn load_graph_from_path(path: &Path, format: EdgeListFormat) -> Result<LoadedGraph> {
    let file = File::open(path)?;
    load_graph(BufReader::new(file), format)
}

pub fn load_graph(reader: impl BufRead, format: EdgeListFormat) -> Result<LoadedGraph> {
    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match format {
            EdgeListFormat::Plain => {
                let mut tokens = trimmed.split_whitespace();
                let u = parse_id(tokens.next(), line_no, "u")?;
                let v = parse_id(tokens.next(), line_no, "v")?;
                if tokens.next().is_some() {
                    return Err(parse_error(line_no, "expected exactly two fields"));
                }
                raw_edges.push((u, v));
            }
            EdgeListFormat::Konect => {
                if trimmed.starts_with('%') {
                    continue;
                }
                let tokens: Vec<&str> = trimmed.split_whitespace().collect();
                if tokens.len() < 2 || tokens.len() > 4 {
                    return Err(parse_error(line_no, "expected 2 to 4 fields"));
                }
                let u = parse_id(Some(tokens[0]), line_no, "u")?;
                let v = parse_id(Some(tokens[1]), line_no, "v")?;
                if u == 0 || v == 0 {
                    return Err(parse_error(line_no, "konect ids are 1-based"));
                }
                // Weight and timestamp fields are ignored.
                raw_edges.push((u - 1, v - 1));
            }
        }
    }
    if raw_edges.is_empty() {
        return Err(Error::EmptyInput);
    }

    let before = raw_edges.len() as u64;
    raw_edges.sort_unstable();
    raw_edges.dedup();
    let duplicates_dropped = before - raw_edges.len() as u64;

    let mut u_ids: Vec<u64> = raw_edges.iter().map(|e| e.0).collect();
    u_ids.sort_unstable();
    u_ids.dedup();
    let mut v_ids: Vec<u64> = raw_edges.iter().map(|e| e.1).collect();
    v_ids.sort_unstable();
    v_ids.dedup();

    let edges: Vec<(u32, u32)> = raw_edges
        .iter()
        .map(|&(u, v)| {
            let du = u_ids.binary_search(&u).expect("id present") as u32;
            let dv = v_ids.binary_search(&v).expect("id present") as u32;
            (du, dv)
        })
        .collect();

    Ok(LoadedGraph {
        graph: BipartiteGraph::from_edges(u_ids.len(), v_ids.len(), &edges),
        u_ids,
        v_ids,
        duplicates_dropped,
    })
}

fn parse_id(token: Option<&str>, line_no: usize, what: &str) -> Result<u64> {
    let token = token.ok_or_else(|| parse_error(line_no, format!("missing {what} field")))?;
    token
        .parse::<u64>()
        .map_err(|_| parse_error(line_no, format!("{what} field {token:?} is not a non-negative integer")))
}

/// Write the graph in `plain` format using its dense ids. Isolated nodes
/// have no edges and therefore do not survive a write/read round trip.
pub fn write_plain_edge_list(g: &BipartiteGraph, mut out: impl Write) -> std::io::Result<()> {
    for u in 0..g.u_count() as u32 {
        for &v in g.u_neighbors(u) {
            writeln!(out, "{u} {v}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load_str(s: &str, format: EdgeListFormat) -> Result<LoadedGraph> {
        load_graph(s.as_bytes(), format)
    }

    #[test]
    fn plain_k22() {
        let l = load_str("0 0\n0 1\n1 0\n1 1", EdgeListFormat::Plain).unwrap();
        assert_eq!(l.graph, BipartiteGraph::complete(2, 2));
        assert_eq!(l.duplicates_dropped, 0);
    }

    #[test]
    fn konect_is_one_based_and_skips_comments() {
        let l = load_str("% bip comment\n1 1\n1 2", EdgeListFormat::Konect).unwrap();
        assert_eq!(l.graph.u_count(), 1);
        assert_eq!(l.graph.v_count(), 2);
        assert_eq!(l.graph.edge_count(), 2);
        assert_eq!(l.u_ids, vec![0]);
        assert_eq!(l.v_ids, vec![0, 1]);
    }

    #[test]
    fn konect_tolerates_weight_and_timestamp() {
        let l = load_str("1 1 0.5 1234\n2 1 1 99", EdgeListFormat::Konect).unwrap();
        assert_eq!(l.graph.u_count(), 2);
        assert_eq!(l.graph.v_count(), 1);
    }

    #[test]
    fn duplicates_are_reported() {
        let l = load_str("0 0\n0 0", EdgeListFormat::Plain).unwrap();
        assert_eq!(l.graph.edge_count(), 1);
        assert_eq!(l.duplicates_dropped, 1);
    }

    #[test]
    fn sparse_ids_compact_in_ascending_order() {
        let l = load_str("100 7\n3 7\n100 900", EdgeListFormat::Plain).unwrap();
        assert_eq!(l.u_ids, vec![3, 100]);
        assert_eq!(l.v_ids, vec![7, 900]);
        assert!(l.graph.has_edge(0, 0));
        assert!(l.graph.has_edge(1, 1));
        assert!(!l.graph.has_edge(0, 1));
    }

    #[test]
    fn errors_carry_line_numbers() {
        match load_str("0 0\nx 1", EdgeListFormat::Plain) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match load_str("0 0 0", EdgeListFormat::Plain) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        match load_str("0 1", EdgeListFormat::Konect) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            load_str("", EdgeListFormat::Plain),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            load_str("% only comments\n", EdgeListFormat::Konect),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn round_trip_plain() {
        // Isolated nodes cannot survive an edge-list round trip, so test on
        // graphs with minimum degree >= 1.
        for g in [
            crate::oracle::figure1(),
            BipartiteGraph::complete(4, 7),
            BipartiteGraph::from_edges(3, 3, &[(0, 0), (1, 1), (2, 2), (0, 2)]),
        ] {
            let mut buf = Vec::new();
            write_plain_edge_list(&g, &mut buf).unwrap();
            let reloaded = load_graph(buf.as_slice(), EdgeListFormat::Plain).unwrap();
            assert_eq!(reloaded.graph, g);
        }
    }
}
