//! Text formats: the edge-list format, DIMACS edge format, and the
//! one-path-per-line partition format.
//!
//! Edge list:
//! ```text
//! # comment
//! n 4
//! 0 1
//! 1 2
//! ```
//! The `n` header is optional; without it the vertex count is one more than
//! the largest endpoint. DIMACS input uses `p edge <n> <m>` and 1-indexed
//! `e <u> <v>` lines; `c` lines are comments.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_uint(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse::<usize>().map_err(|_| {
        malformed(
            line,
            format!("expected a nonnegative integer, found `{tok}`"),
        )
    })
}

fn build(n: usize, edges: Vec<(Vertex, Vertex, usize)>) -> Result<Graph, ParseError> {
    for &(u, v, line) in &edges {
        if u >= n || v >= n {
            return Err(ParseError::Graph {
                line,
                source: GraphError::VertexOutOfRange(u, v, n),
            });
        }
        if u == v {
            return Err(ParseError::Graph {
                line,
                source: GraphError::SelfLoop(u),
            });
        }
    }
    Ok(
        Graph::from_edges(n, edges.into_iter().map(|(u, v, _)| (u, v)))
            .expect("edges checked above"),
    )
}

/// Parses the edge-list format.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks.as_slice() {
            ["n", count] => {
                if declared.is_some() {
                    return Err(malformed(line, "duplicate `n` header"));
                }
                if !edges.is_empty() {
                    return Err(malformed(line, "`n` header must precede edges"));
                }
                declared = Some(parse_uint(count, line)?);
            }
            [u, v] => {
                let (u, v) = (parse_uint(u, line)?, parse_uint(v, line)?);
                if u == v {
                    return Err(ParseError::Graph {
                        line,
                        source: GraphError::SelfLoop(u),
                    });
                }
                edges.push((u, v, line));
            }
            _ => {
                return Err(malformed(
                    line,
                    format!("expected `u v` or `n <count>`, found `{body}`"),
                ))
            }
        }
    }
    let n = declared.unwrap_or_else(|| {
        edges
            .iter()
            .map(|&(u, v, _)| u.max(v) + 1)
            .max()
            .unwrap_or(0)
    });
    build(n, edges)
}

/// Parses DIMACS `p edge` / `e u v` input, converting to 0-indexed vertices.
pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            [] | ["c", ..] => {}
            ["p", _format, n, _m] => {
                if declared.is_some() {
                    return Err(malformed(line, "duplicate problem line"));
                }
                declared = Some(parse_uint(n, line)?);
            }
            ["e", u, v] => {
                if declared.is_none() {
                    return Err(malformed(line, "edge before problem line"));
                }
                let (u, v) = (parse_uint(u, line)?, parse_uint(v, line)?);
                if u == 0 || v == 0 {
                    return Err(malformed(line, "DIMACS vertices are 1-indexed"));
                }
                if u == v {
                    return Err(ParseError::Graph {
                        line,
                        source: GraphError::SelfLoop(u - 1),
                    });
                }
                edges.push((u - 1, v - 1, line));
            }
            _ => {
                return Err(malformed(
                    line,
                    format!("unrecognized DIMACS line `{}`", raw.trim()),
                ))
            }
        }
    }
    let n =
        declared.ok_or_else(|| malformed(text.lines().count().max(1), "missing `p edge` line"))?;
    build(n, edges)
}

/// Picks DIMACS when a `p` line is present, the edge-list format otherwise.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let dimacs = text
        .lines()
        .any(|l| l.split_whitespace().next() == Some("p"));
    if dimacs {
        parse_dimacs(text)
    } else {
        parse_edge_list(text)
    }
}

/// Serializes in the edge-list format with an explicit `n` header.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses one path per line, vertices separated by whitespace. Blank lines
/// and `#` comments are skipped. Vertex order within a line is preserved.
pub fn parse_paths(text: &str) -> Result<Vec<Vec<Vertex>>, ParseError> {
    let mut paths = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let path = body
            .split_whitespace()
            .map(|t| parse_uint(t, idx + 1))
            .collect::<Result<Vec<_>, _>>()?;
        paths.push(path);
    }
    Ok(paths)
}

pub fn write_paths(paths: &[Vec<Vertex>]) -> String {
    let mut out = String::new();
    for p in paths {
        let line: Vec<String> = p.iter().map(ToString::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edge_list_examples() {
        let g = parse_edge_list("n 3\n0 1\n1 2").unwrap();
        assert_eq!(g.vertex_count(), 3);
        let degs: Vec<_> = g.vertices().map(|v| g.degree(v)).collect();
        assert_eq!(degs, vec![1, 2, 1]);

        let g = parse_edge_list("n 2").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 0));

        let err = parse_edge_list("0 0").unwrap_err();
        assert_eq!(
            err,
            ParseError::Graph {
                line: 1,
                source: GraphError::SelfLoop(0)
            }
        );
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        match parse_edge_list("n 3\n0 1\n1 x\n").unwrap_err() {
            ParseError::Malformed { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e:?}"),
        }
        match parse_edge_list("n 3\n# c\n0 3\n").unwrap_err() {
            ParseError::Graph { line, source } => {
                assert_eq!(line, 3);
                assert_eq!(source, GraphError::VertexOutOfRange(0, 3, 3));
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(parse_edge_list("0 1 2").is_err());
    }

    #[test]
    fn headerless_edge_list_infers_n() {
        let g = parse_edge_list("# comment\n0 4\n").unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(parse_edge_list("").unwrap().vertex_count(), 0);
    }

    #[test]
    fn dimacs() {
        let g = parse_graph("c triangle plus isolated\np edge 4 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(parse_dimacs("p edge 2 1\ne 0 1\n").is_err());
        assert!(parse_dimacs("p edge 2 1\ne 1 3\n").is_err());
        assert!(parse_dimacs("e 1 2\n").is_err());
    }

    #[test]
    fn paths_format() {
        let paths = parse_paths("2 0 1\n\n3\n").unwrap();
        assert_eq!(paths, vec![vec![2, 0, 1], vec![3]]);
        assert_eq!(write_paths(&paths), "2 0 1\n3\n");
    }

    proptest! {
        #[test]
        fn edge_list_round_trip(n in 1usize..15, es in proptest::collection::vec((0usize..15, 0usize..15), 0..40)) {
            let es = es.into_iter().filter(|&(u, v)| u < n && v < n && u != v);
            let g = Graph::from_edges(n, es).unwrap();
            prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
        }
    }
}
