//! Certificate files: basis graphs in the graph text format and Gram
//! matrices as exact rationals.
//!
//! ```text
//! sos-certificate
//! block dense 2
//! graph
//! n=3
//! labels=1:0,2:2
//! edges=0-1,1-2
//! graph
//! n=3
//! labels=1:1,2:2
//! edges=0-1,1-2
//! gram
//! 1 -1
//! -1 1
//! block diagonal 1
//! graph
//! ...
//! gram
//! 1
//! ```
//!
//! A diagonal block lists only its diagonal.

use crate::text::{content_lines, parse_block, write_graph, Line, ParseError};
use gluon_core::graph::canonicalize;
use gluon_core::soscert::{CertificateBlock, Gram, RationalMatrix, SosCertificate};
use gluon_core::Rational;
use std::fmt::Write as _;

const HEADER: &str = "sos-certificate";

pub fn write_certificate(cert: &SosCertificate) -> String {
    let mut out = format!("{HEADER}\n");
    for block in &cert.blocks {
        let kind = match block.gram {
            Gram::Dense(_) => "dense",
            Gram::Diagonal(_) => "diagonal",
        };
        let _ = writeln!(out, "block {kind} {}", block.graphs.len());
        for g in &block.graphs {
            let _ = write!(out, "graph\n{}", write_graph(g));
        }
        out.push_str("gram\n");
        match &block.gram {
            Gram::Dense(m) => {
                for row in m.rows() {
                    let row: Vec<String> = row.iter().map(ToString::to_string).collect();
                    let _ = writeln!(out, "{}", row.join(" "));
                }
            }
            Gram::Diagonal(d) => {
                let d: Vec<String> = d.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "{}", d.join(" "));
            }
        }
    }
    out
}

fn rational_row(line: &Line<'_>, expected: usize) -> Result<Vec<Rational>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in line.text.split(' ') {
        if !piece.is_empty() {
            let value = piece.parse::<Rational>().map_err(|_| line.error(offset, format!("`{piece}` is not a rational")))?;
            out.push(value);
        }
        offset += piece.len() + 1;
    }
    if out.len() != expected {
        return Err(line.error(0, format!("expected {expected} entries, found {}", out.len())));
    }
    Ok(out)
}

pub fn parse_certificate(input: &str) -> Result<SosCertificate, ParseError> {
    let lines = content_lines(input);
    let mut it = lines.iter().peekable();
    match it.next() {
        Some(l) if l.text.trim() == HEADER => {}
        Some(l) => return Err(l.error(l.indent(), format!("expected `{HEADER}`"))),
        None => return Err(ParseError::new(1, 1, "empty certificate")),
    }
    let mut blocks = Vec::new();
    while let Some(line) = it.next() {
        let words: Vec<&str> = line.text.split_whitespace().collect();
        let (dense, size) = match words.as_slice() {
            ["block", kind @ ("dense" | "diagonal"), size] => {
                let size: usize = size.parse().map_err(|_| line.error(line.indent(), "invalid block size"))?;
                (*kind == "dense", size)
            }
            _ => return Err(line.error(line.indent(), "expected `block dense|diagonal <size>`")),
        };
        let mut graphs = Vec::with_capacity(size);
        for _ in 0..size {
            match it.next() {
                Some(l) if l.text.trim() == "graph" => {}
                Some(l) => return Err(l.error(l.indent(), "expected `graph`")),
                None => return Err(line.error(0, "block ends early")),
            }
            let block: Vec<Line<'_>> = it.by_ref().take(3).copied().collect();
            if block.len() < 3 {
                return Err(line.error(0, "block ends early"));
            }
            graphs.push(canonicalize(&parse_block(&block)?));
        }
        match it.next() {
            Some(l) if l.text.trim() == "gram" => {}
            Some(l) => return Err(l.error(l.indent(), "expected `gram`")),
            None => return Err(line.error(0, "block has no gram matrix")),
        }
        let mut row_line = || it.next().ok_or_else(|| line.error(0, "gram matrix ends early"));
        let gram = if dense {
            let mut rows = Vec::with_capacity(size);
            for _ in 0..size {
                rows.push(rational_row(row_line()?, size)?);
            }
            let m = RationalMatrix::from_rows(rows).ok_or_else(|| line.error(0, "gram matrix is not square"))?;
            if !m.is_symmetric() {
                return Err(line.error(0, "gram matrix is not symmetric"));
            }
            Gram::Dense(m)
        } else if size == 0 {
            Gram::Diagonal(Vec::new())
        } else {
            Gram::Diagonal(rational_row(row_line()?, size)?)
        };
        blocks.push(CertificateBlock { graphs, gram });
    }
    Ok(SosCertificate { blocks })
}
