//! Text formats for graphs, update batches, queries and result streams.
//!
//! Graph file:
//!
//! ```text
//! n m
//! u v          (m lines, 0-based ids)
//! OFF k
//! v1 v2 ...    (k ids, whitespace or newline separated)
//! ```
//!
//! Lines starting with `#` are ignored anywhere. A missing `OFF` section
//! means every vertex starts activated.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::partition::{StatePartition, UpdateBatch};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let t = line.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, t))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found '{token}'")))
}

fn vertex(line: usize, token: &str, n: usize) -> Result<VertexId> {
    let v: VertexId = number(line, token, "vertex id")?;
    if v >= n {
        return Err(parse_err(line, format!("vertex {v} out of range (n = {n})")));
    }
    Ok(v)
}

pub fn load_graph(text: &str) -> Result<(Graph, StatePartition)> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header 'n m'"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(parse_err(hline, "malformed header, expected 'n m'"));
    }
    let n: usize = number(hline, head[0], "vertex count")?;
    let m: usize = number(hline, head[1], "edge count")?;

    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for i in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| parse_err(last_line + 1, format!("expected {m} edges, found {i}")))?;
        last_line = ln;
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 2 {
            return Err(parse_err(ln, format!("expected edge 'u v', found '{line}'")));
        }
        edges.push((vertex(ln, tok[0], n)?, vertex(ln, tok[1], n)?));
    }

    let mut off = Vec::new();
    if let Some((ln, line)) = lines.next() {
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 2 || tok[0] != "OFF" {
            return Err(parse_err(ln, format!("expected 'OFF k', found '{line}'")));
        }
        let k: usize = number(ln, tok[1], "off count")?;
        for (ln, line) in lines {
            for t in line.split_whitespace() {
                if off.len() == k {
                    return Err(parse_err(ln, format!("more than {k} OFF vertices")));
                }
                off.push(vertex(ln, t, n)?);
            }
        }
        if off.len() < k {
            return Err(parse_err(ln, format!("expected {k} OFF vertices, found {}", off.len())));
        }
    }

    let graph = Graph::from_edges(n, &edges)?;
    let partition = StatePartition::from_off(n, &off)?;
    Ok((graph, partition))
}

pub fn serialize_graph(g: &Graph, p: &StatePartition) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    writeln!(out, "OFF {}", p.n_off()).unwrap();
    for v in p.off_vertices() {
        writeln!(out, "{v}").unwrap();
    }
    out
}

/// Parses `+v` / `-v` lines into a batch; partition checks happen later.
pub fn parse_updates(text: &str) -> Result<UpdateBatch> {
    let mut deactivate = Vec::new();
    let mut activate = Vec::new();
    for (ln, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix('+') {
            activate.push(number(ln, rest.trim(), "vertex id")?);
        } else if let Some(rest) = line.strip_prefix('-') {
            deactivate.push(number(ln, rest.trim(), "vertex id")?);
        } else {
            return Err(parse_err(ln, format!("expected '+v' or '-v', found '{line}'")));
        }
    }
    UpdateBatch::new(deactivate, activate)
}

pub fn serialize_updates(batch: &UpdateBatch) -> String {
    let mut out = String::new();
    for v in batch.deactivate() {
        writeln!(out, "-{v}").unwrap();
    }
    for v in batch.activate() {
        writeln!(out, "+{v}").unwrap();
    }
    out
}

pub fn parse_queries(text: &str) -> Result<Vec<(VertexId, VertexId)>> {
    content_lines(text)
        .map(|(ln, line)| {
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() != 2 {
                return Err(parse_err(ln, format!("expected query 'u v', found '{line}'")));
            }
            Ok((number(ln, tok[0], "vertex id")?, number(ln, tok[1], "vertex id")?))
        })
        .collect()
}

/// One answer per line: `1`, `0`, or `E` for a rejected query.
pub fn format_results(results: &[Option<bool>]) -> String {
    let mut out = String::with_capacity(results.len() * 2);
    for r in results {
        out.push_str(match r {
            Some(true) => "1\n",
            Some(false) => "0\n",
            None => "E\n",
        });
    }
    out
}
