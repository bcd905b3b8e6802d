//! Text formats for colored graphs.
//!
//! * Edge list: one `u v` pair of 0-based ids per line.
//! * Color list: one `node label` pair per line, every node exactly once.
//! * Combined: edge lines plus `@color node label` directives in one file.
//!
//! Blank lines and lines starting with `#` are skipped everywhere. Fields may
//! be separated by any whitespace, tabs included.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::ColoredGraph;

const COLOR_DIRECTIVE: &str = "@color";

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_id(line: usize, field: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| parse_err(line, format!("`{field}` is not a node id")))
}

/// Edges with the line each came from.
pub fn parse_edges(text: &str) -> Result<Vec<(usize, usize, usize)>> {
    let mut edges = Vec::new();
    for (line, content) in content_lines(text) {
        if content.starts_with(COLOR_DIRECTIVE) {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [u, v] = fields[..] else {
            return Err(parse_err(line, format!("expected `u v`, found `{content}`")));
        };
        edges.push((line, parse_id(line, u)?, parse_id(line, v)?));
    }
    Ok(edges)
}

/// Labels indexed by node id. Accepts plain `node label` lines or, with
/// `directive`, only `@color node label` lines.
fn parse_color_lines(text: &str, directive: bool) -> Result<Vec<String>> {
    let mut assigned: Vec<Option<String>> = Vec::new();
    for (line, content) in content_lines(text) {
        let mut fields: Vec<&str> = content.split_whitespace().collect();
        if directive {
            if fields.first() != Some(&COLOR_DIRECTIVE) {
                continue;
            }
            fields.remove(0);
        }
        let [node, label] = fields[..] else {
            return Err(parse_err(line, format!("expected `node label`, found `{content}`")));
        };
        let node = parse_id(line, node)?;
        if node >= assigned.len() {
            assigned.resize(node + 1, None);
        }
        if assigned[node].is_some() {
            return Err(parse_err(line, format!("node {node} is colored twice")));
        }
        assigned[node] = Some(label.to_string());
    }
    assigned
        .into_iter()
        .enumerate()
        .map(|(v, label)| label.ok_or_else(|| Error::InvalidGraph(format!("node {v} has no color"))))
        .collect()
}

pub fn parse_colors(text: &str) -> Result<Vec<String>> {
    parse_color_lines(text, false)
}

pub fn is_combined(text: &str) -> bool {
    content_lines(text).any(|(_, l)| l.starts_with(COLOR_DIRECTIVE))
}

/// Builds a graph, reporting the source line of bad edges.
pub fn graph_from_parts(edges: &[(usize, usize, usize)], labels: &[String]) -> Result<ColoredGraph> {
    let n = labels.len();
    let mut seen = std::collections::HashMap::new();
    for &(line, u, v) in edges {
        if u == v {
            return Err(parse_err(line, format!("self-loop on node {u}")));
        }
        if u >= n || v >= n {
            return Err(parse_err(line, format!("edge {u} {v} names a node without a color (n = {n})")));
        }
        if let Some(first) = seen.insert((u.min(v), u.max(v)), line) {
            return Err(parse_err(line, format!("duplicate edge {u} {v}, first given on line {first}")));
        }
    }
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(_, u, v)| (u, v)).collect();
    ColoredGraph::new(n, &pairs, labels)
}

pub fn parse_combined(text: &str) -> Result<ColoredGraph> {
    let labels = parse_color_lines(text, true)?;
    graph_from_parts(&parse_edges(text)?, &labels)
}

pub fn parse_graph(edges: &str, colors: &str) -> Result<ColoredGraph> {
    graph_from_parts(&parse_edges(edges)?, &parse_colors(colors)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidGraph(format!("cannot read {}: {e}", path.display())))
}

/// Reads a graph from an edge file and a color file, or from a single
/// combined file when `colors` is `None`.
pub fn read_graph(graph: &Path, colors: Option<&Path>) -> Result<ColoredGraph> {
    let text = read(graph)?;
    match colors {
        Some(colors) => parse_graph(&text, &read(colors)?),
        None if is_combined(&text) => parse_combined(&text),
        None => Err(Error::InvalidGraph(format!(
            "{} has no `{COLOR_DIRECTIVE}` lines and no color file was given",
            graph.display()
        ))),
    }
}

pub fn write_edges(g: &ColoredGraph) -> String {
    let mut out = String::new();
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_colors(g: &ColoredGraph) -> String {
    let mut out = String::new();
    for v in 0..g.node_count() {
        let _ = writeln!(out, "{v} {}", g.color_label(g.color_of(v)));
    }
    out
}

pub fn write_combined(g: &ColoredGraph) -> String {
    let mut out = String::new();
    for v in 0..g.node_count() {
        let _ = writeln!(out, "{COLOR_DIRECTIVE}\t{v}\t{}", g.color_label(g.color_of(v)));
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u}\t{v}");
    }
    out
}
