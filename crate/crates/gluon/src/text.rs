//! Plain-text formats for graphs and combinations.
//!
//! A graph block is three lines:
//!
//! ```text
//! n=4
//! labels=1:0,2:3
//! edges=0-1,1-2,2-3
//! ```
//!
//! A combination file defines named graphs with a `graph <name>` line
//! followed by a block, and lists terms as `<rational> * <name>`. The name
//! `1` always refers to the empty graph. Lines starting with `#` and blank
//! lines are ignored.
//!
//! ```text
//! graph p2
//! n=3
//! labels=
//! edges=0-1,1-2
//!
//! graph e2
//! n=4
//! labels=
//! edges=0-1,2-3
//!
//! 1 * p2
//! -1 * e2
//! ```

use gluon_core::graph::{Label, PartiallyLabeledGraph, MAX_VERTICES};
use gluon_core::{GraphCombination, Rational};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

/// A malformed input, located by 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self { line, column, message: message.into() }
    }
}

/// A line of input with its 1-based number; `text` excludes trailing whitespace.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub text: &'a str,
}

impl<'a> Line<'a> {
    pub fn error(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.number, offset + 1, message)
    }

    /// Column offset of the first non-blank character.
    pub fn indent(&self) -> usize {
        self.text.len() - self.text.trim_start().len()
    }
}

/// Non-blank, non-comment lines.
pub(crate) fn content_lines(input: &str) -> Vec<Line<'_>> {
    input
        .lines()
        .enumerate()
        .map(|(i, text)| Line { number: i + 1, text: text.trim_end() })
        .filter(|l| {
            let t = l.text.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
        .collect()
}

/// Comma-separated fields of `text` starting at byte `start`, with their offsets.
fn fields(text: &str, start: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut offset = start;
    for piece in text[start..].split(',') {
        let lead = piece.len() - piece.trim_start().len();
        let trimmed = piece.trim();
        if !trimmed.is_empty() {
            out.push((offset + lead, trimmed));
        }
        offset += piece.len() + 1;
    }
    out
}

/// `key=` prefix check; returns the offset just past `=`.
fn expect_key(line: &Line<'_>, key: &str) -> Result<usize, ParseError> {
    let indent = line.indent();
    let rest = &line.text[indent..];
    match rest.strip_prefix(key).and_then(|r| r.strip_prefix('=')) {
        Some(_) => Ok(indent + key.len() + 1),
        None => Err(line.error(indent, format!("expected `{key}=`"))),
    }
}

fn parse_number<T: std::str::FromStr>(line: &Line<'_>, offset: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token.parse().map_err(|_| line.error(offset, format!("`{token}` is not a valid {what}")))
}

/// Parses one graph block from exactly three lines.
pub(crate) fn parse_block(lines: &[Line<'_>]) -> Result<PartiallyLabeledGraph, ParseError> {
    let [n_line, labels_line, edges_line] = lines else {
        let at = lines.first().map_or(ParseError::new(1, 1, ""), |l| l.error(0, ""));
        return Err(ParseError { message: "a graph block has exactly three lines".into(), ..at });
    };

    let start = expect_key(n_line, "n")?;
    let token = n_line.text[start..].trim();
    let n: usize = parse_number(n_line, start, token, "vertex count")?;
    if n > MAX_VERTICES {
        return Err(n_line.error(start, format!("{n} vertices exceeds the limit of {MAX_VERTICES}")));
    }

    let start = expect_key(labels_line, "labels")?;
    let mut labels: Vec<(Label, usize)> = Vec::new();
    let mut seen_labels = BTreeSet::new();
    let mut labeled_vertices = BTreeSet::new();
    for (offset, field) in fields(labels_line.text, start) {
        let Some((l, v)) = field.split_once(':') else {
            return Err(labels_line.error(offset, format!("expected `<label>:<vertex>`, found `{field}`")));
        };
        let label: Label = parse_number(labels_line, offset, l.trim(), "label")?;
        let vertex_offset = offset + l.len() + 1;
        let vertex: usize = parse_number(labels_line, vertex_offset, v.trim(), "vertex")?;
        if label == 0 {
            return Err(labels_line.error(offset, "labels are positive integers"));
        }
        if vertex >= n {
            return Err(labels_line.error(vertex_offset, format!("vertex {vertex} out of range for n={n}")));
        }
        if !seen_labels.insert(label) {
            return Err(labels_line.error(offset, format!("duplicate label {label}")));
        }
        if !labeled_vertices.insert(vertex) {
            return Err(labels_line.error(vertex_offset, format!("vertex {vertex} already carries a label")));
        }
        labels.push((label, vertex));
    }

    let start = expect_key(edges_line, "edges")?;
    let mut edges = Vec::new();
    let mut seen_edges = BTreeSet::new();
    for (offset, field) in fields(edges_line.text, start) {
        let Some((u, v)) = field.split_once('-') else {
            return Err(edges_line.error(offset, format!("expected `<u>-<v>`, found `{field}`")));
        };
        let u: usize = parse_number(edges_line, offset, u.trim(), "vertex")?;
        let v_offset = offset + field.find('-').unwrap() + 1;
        let v: usize = parse_number(edges_line, v_offset, v.trim(), "vertex")?;
        for (x, at) in [(u, offset), (v, v_offset)] {
            if x >= n {
                return Err(edges_line.error(at, format!("vertex {x} out of range for n={n}")));
            }
        }
        if u == v {
            return Err(edges_line.error(offset, format!("loop at vertex {u}")));
        }
        if !seen_edges.insert((u.min(v), u.max(v))) {
            return Err(edges_line.error(offset, format!("duplicate edge {u}-{v}")));
        }
        edges.push((u, v));
    }

    PartiallyLabeledGraph::new(n, &edges, &labels).map_err(|e| n_line.error(0, e.to_string()))
}

/// Parses a single graph, optionally preceded by a `graph <name>` line.
pub fn parse_graph(input: &str) -> Result<PartiallyLabeledGraph, ParseError> {
    let lines = content_lines(input);
    let body = match lines.first() {
        Some(l) if l.text.trim_start().starts_with("graph") && !l.text.contains('=') => &lines[1..],
        _ => &lines[..],
    };
    if body.len() > 3 {
        return Err(body[3].error(body[3].indent(), "unexpected content after the graph block"));
    }
    if body.is_empty() {
        return Err(ParseError::new(1, 1, "expected a graph block"));
    }
    parse_block(body)
}

/// Writes the three-line block for `g`, labels and edges sorted.
pub fn write_graph(g: &PartiallyLabeledGraph) -> String {
    let mut labels = g.labeling();
    labels.sort();
    let labels: Vec<String> = labels.iter().map(|(l, v)| format!("{l}:{v}")).collect();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.sort();
    let edges: Vec<String> = edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("n={}\nlabels={}\nedges={}\n", g.vertex_count(), labels.join(","), edges.join(","))
}

/// Graphs and terms of a combination file, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationFile {
    pub graphs: BTreeMap<String, PartiallyLabeledGraph>,
    pub terms: Vec<(Rational, String)>,
}

impl CombinationFile {
    pub fn combination(&self) -> GraphCombination {
        let mut out = GraphCombination::zero();
        for (c, name) in &self.terms {
            let g = if name == "1" { PartiallyLabeledGraph::empty() } else { self.graphs[name].clone() };
            out = out + GraphCombination::term(c.clone(), &g);
        }
        out
    }
}

fn parse_rational(line: &Line<'_>, offset: usize, token: &str) -> Result<Rational, ParseError> {
    let bad = || line.error(offset, format!("`{token}` is not a rational of the form p/q or an integer"));
    let (num, den) = match token.split_once('/') {
        Some((p, q)) => (p, q),
        None => (token, "1"),
    };
    let num: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
    if den == num_bigint::BigInt::from(0) {
        return Err(line.error(offset, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
}

/// Parses a combination file. A file holding a single graph and no term
/// lines is read as that graph with coefficient 1.
pub fn parse_combination_file(input: &str) -> Result<CombinationFile, ParseError> {
    let lines = content_lines(input);
    let mut graphs = BTreeMap::new();
    let mut terms = Vec::new();
    let mut term_lines = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i];
        let indent = line.indent();
        let text = &line.text[indent..];
        if let Some(rest) = text.strip_prefix("graph").filter(|r| r.is_empty() || r.starts_with(char::is_whitespace)) {
            let name = rest.trim();
            let name_offset = indent + 5 + (rest.len() - rest.trim_start().len());
            if !valid_name(name) || name == "1" {
                return Err(line.error(name_offset, format!("invalid graph name `{name}`")));
            }
            if graphs.contains_key(name) {
                return Err(line.error(name_offset, format!("graph `{name}` defined twice")));
            }
            let block = lines.get(i + 1..i + 4).ok_or_else(|| line.error(indent, "graph block is incomplete"))?;
            graphs.insert(name.to_string(), parse_block(block)?);
            i += 4;
            continue;
        }
        if text.starts_with("n=") && graphs.is_empty() && terms.is_empty() {
            // Anonymous single graph.
            let block = lines.get(i..i + 3).ok_or_else(|| line.error(indent, "graph block is incomplete"))?;
            graphs.insert("g".to_string(), parse_block(block)?);
            i += 3;
            if let Some(extra) = lines.get(i) {
                return Err(extra.error(extra.indent(), "an anonymous graph must be the only content"));
            }
            return Ok(CombinationFile { graphs, terms: vec![(Rational::from_integer(1.into()), "g".into())] });
        }
        let Some(star) = text.find('*') else {
            return Err(line.error(indent, "expected `graph <name>` or `<rational> * <name>`"));
        };
        let coeff = text[..star].trim();
        let coeff = coeff.strip_prefix('+').map(str::trim_start).unwrap_or(coeff);
        let c = parse_rational(&line, indent, &coeff.replace(' ', ""))?;
        let after = &text[star + 1..];
        let name = after.trim();
        let name_offset = indent + star + 1 + (after.len() - after.trim_start().len());
        if !valid_name(name) {
            return Err(line.error(name_offset, format!("invalid graph reference `{name}`")));
        }
        terms.push((c, name.to_string()));
        term_lines.push((line, name_offset));
        i += 1;
    }
    for ((_, name), (line, offset)) in terms.iter().zip(&term_lines) {
        if name != "1" && !graphs.contains_key(name) {
            return Err(line.error(*offset, format!("undefined graph `{name}`")));
        }
    }
    if terms.is_empty() && graphs.len() == 1 {
        let name = graphs.keys().next().unwrap().clone();
        terms.push((Rational::from_integer(1.into()), name));
    }
    Ok(CombinationFile { graphs, terms })
}

pub fn parse_combination(input: &str) -> Result<GraphCombination, ParseError> {
    parse_combination_file(input).map(|f| f.combination())
}

/// Writes `a` with graphs named `g1, g2, ...` in term order; the empty graph is `1`.
pub fn write_combination(a: &GraphCombination) -> String {
    let mut defs = String::new();
    let mut terms = String::new();
    let mut k = 0;
    for (g, c) in a.terms() {
        let name = if g.vertex_count() == 0 {
            "1".to_string()
        } else {
            k += 1;
            let name = format!("g{k}");
            let _ = write!(defs, "graph {name}\n{}\n", write_graph(g));
            name
        };
        let _ = writeln!(terms, "{c} * {name}");
    }
    if terms.is_empty() {
        return "# zero\n".to_string();
    }
    defs + &terms
}
