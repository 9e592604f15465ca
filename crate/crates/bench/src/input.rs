//! Readers for the graph and grammar input files.

use std::fs;
use std::path::Path;

use gpr_core::apps::boolean::BoolMatrix;
use gpr_core::apps::cfg::CnfGrammar;

use crate::BenchError;

/// `u v` per line, 0-indexed; blank lines and `#` comments are skipped.
/// The vertex count is one more than the largest index.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>), BenchError> {
    let mut edges = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || BenchError::Input(format!("line {}: expected two vertex indices, got {line:?}", no + 1));
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(bad()),
        }
    }
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Ok((n, edges))
}

pub fn directed(n: usize, edges: &[(usize, usize)]) -> BoolMatrix {
    let mut g = BoolMatrix::falses(n);
    for &(u, v) in edges {
        if u != v {
            g.set(u, v, true);
        }
    }
    g
}

/// Both directions of every edge; self-loops are dropped.
pub fn undirected(n: usize, edges: &[(usize, usize)]) -> BoolMatrix {
    let mut g = directed(n, edges);
    for &(u, v) in edges {
        if u != v {
            g.set(v, u, true);
        }
    }
    g
}

pub fn read_graph(path: &Path) -> Result<(usize, Vec<(usize, usize)>), BenchError> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn read_grammar(path: &Path) -> Result<CnfGrammar, BenchError> {
    Ok(CnfGrammar::from_json(&fs::read_to_string(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_lists() {
        let (n, e) = parse_edge_list("0 1\n# comment\n\n1 2  # trailing\n").unwrap();
        assert_eq!((n, e), (3, vec![(0, 1), (1, 2)]));
        assert_eq!(parse_edge_list("").unwrap().0, 0);
        assert!(parse_edge_list("0 1 2").is_err());
        assert!(parse_edge_list("0 x").is_err());
        let g = undirected(3, &[(0, 1), (2, 2)]);
        assert!(g.get(1, 0) && !g.get(2, 2));
    }
}
