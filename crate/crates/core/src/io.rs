//! Text formats shared by every command.
//!
//! Edge list: a header line `n m d`, then `m` lines `u v` with `u < v`.
//! Fields are whitespace separated decimals, lines end in LF, and `#` starts
//! a comment that runs to the end of the line. Writers emit edges in
//! lexicographic order, so writing a parsed file reproduces it byte for byte
//! when the input was itself canonical.
//!
//! Matching file: one matched pair `u v` per line, same comment rules.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, Matching, SimpleGraph};

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let content = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse_num(field: &str, line: usize) -> Result<usize> {
    field.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a non-negative integer, found {field:?}"),
    })
}

fn parse_pair(fields: &[&str], line: usize) -> Result<(usize, usize)> {
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            msg: format!("expected 2 fields, found {}", fields.len()),
        });
    }
    Ok((parse_num(fields[0], line)?, parse_num(fields[1], line)?))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    if header.len() != 3 {
        return Err(Error::Parse {
            line: hline,
            msg: "header must be `n m d`".into(),
        });
    }
    let n = parse_num(header[0], hline)?;
    let m = parse_num(header[1], hline)?;
    let d = parse_num(header[2], hline)?;
    let mut edges = Vec::with_capacity(m);
    for (line, fields) in lines {
        let (u, v) = parse_pair(&fields, line)?;
        if u >= v {
            return Err(Error::Parse {
                line,
                msg: format!("edge {u} {v} must satisfy u < v"),
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    let g = Graph::from_edges(n, &edges)?;
    if g.degree() != d {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header announces degree {d}, graph has degree {}", g.degree()),
        });
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(g.edge_count() * 12 + 32);
    writeln!(out, "{} {} {}", g.vertex_count(), g.edge_count(), g.degree()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_matching(g: &SimpleGraph, text: &str) -> Result<Matching> {
    let pairs = data_lines(text)
        .map(|(line, fields)| parse_pair(&fields, line))
        .collect::<Result<Vec<_>>>()?;
    Matching::from_pairs(g, &pairs)
}

pub fn write_matching(m: &Matching) -> String {
    let mut out = String::new();
    for (u, v) in m.pairs() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn read_graph(path: &std::path::Path) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let text = "# K4\n4 6 3\n0 1\n0 2 # spoke\n0 3\n\n1 2\n1 3\n2 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.degree(), 3);
        assert_eq!(write_edge_list(&g), "4 6 3\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("4 6\n").is_err());
        assert!(parse_edge_list("3 3 2\n0 1\n1 2\n").is_err());
        assert!(parse_edge_list("3 3 2\n0 1\n2 1\n0 2\n").is_err());
        assert!(parse_edge_list("3 3 3\n0 1\n1 2\n0 2\n").is_err());
        assert!(matches!(
            parse_edge_list("3 3 2\n0 1\n1 x\n0 2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn matching_file() {
        let g = parse_edge_list("4 6 3\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
        let m = parse_matching(&g, "# pairs\n3 2\n").unwrap();
        assert_eq!(m.pairs(), vec![(2, 3)]);
        assert_eq!(write_matching(&m), "2 3\n");
        assert!(parse_matching(&g, "0 1\n1 2\n").is_err());
    }
}
