//! SDPA sparse format (`.dat-s`) and CSDP-style solution files.
//!
//! A Gram problem `<A_i, Q> = b_i, Q PSD` is the dual side of an SDPA
//! problem: `F_i = A_i`, `c_i = b_i` and `F_0 = 0`. Right-hand sides are
//! scaled by the least common denominator so that every number in the file
//! is an integer; the scale is recorded in a comment and undone on reading.

use crate::text::{content_lines, Line, ParseError};
use gluon_core::soscert::{BlockKind, NumericBlock, NumericSolution, SdpProblem, SolveStatus, SolverOptions};
use gluon_core::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Write as _;

const SCALE_TAG: &str = "scale=";

/// One nonzero of constraint matrix `matrix` (0 is the objective), 1-based
/// block and upper-triangular position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdpaEntry {
    pub matrix: usize,
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdpaFile {
    /// Comment lines without their leading `"` or `*`.
    pub comments: Vec<String>,
    /// Positive for dense blocks, negative for diagonal ones.
    pub block_struct: Vec<i64>,
    pub objective: Vec<Rational>,
    pub entries: Vec<SdpaEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SdpaError {
    #[error("{0} has no finite decimal expansion")]
    NotDecimal(Rational),
    #[error("file does not match the problem: {0}")]
    Mismatch(String),
}

impl SdpaFile {
    /// Encodes `problem`, multiplying the right-hand sides by their common denominator.
    pub fn from_problem(problem: &SdpProblem) -> Self {
        let scale = problem.constraints.iter().fold(BigInt::one(), |l, c| l.lcm(c.rhs.denom()));
        let scale_r = Rational::from_integer(scale.clone());
        let block_struct = problem
            .blocks
            .iter()
            .map(|b| match b.kind {
                BlockKind::Dense => b.size() as i64,
                BlockKind::Diagonal => -(b.size() as i64),
            })
            .collect();
        let objective = problem.constraints.iter().map(|c| &c.rhs * &scale_r).collect();
        let mut entries = Vec::new();
        for (i, c) in problem.constraints.iter().enumerate() {
            for e in &c.entries {
                entries.push(SdpaEntry {
                    matrix: i + 1,
                    block: e.block + 1,
                    row: e.row + 1,
                    col: e.col + 1,
                    value: Rational::one(),
                });
            }
        }
        let comments = vec![
            format!("gluon Gram problem, degree {}", problem.degree),
            format!("{SCALE_TAG}{scale}"),
        ];
        Self { comments, block_struct, objective, entries }
    }

    /// The factor the right-hand sides were multiplied by; 1 when unrecorded.
    pub fn scale(&self) -> Rational {
        self.comments
            .iter()
            .find_map(|c| c.trim().strip_prefix(SCALE_TAG)?.parse::<BigInt>().ok())
            .map_or_else(Rational::one, Rational::from_integer)
    }

    /// Checks that this file encodes `problem`.
    pub fn matches(&self, problem: &SdpProblem) -> Result<(), SdpaError> {
        let expected = Self::from_problem(problem);
        let fail = |what: &str| Err(SdpaError::Mismatch(what.into()));
        if self.block_struct != expected.block_struct {
            return fail("block structure differs");
        }
        let scale = self.scale();
        let rhs: Vec<Rational> = self.objective.iter().map(|c| c / &scale).collect();
        if rhs != problem.rhs() {
            return fail("right-hand sides differ");
        }
        let mut ours = self.entries.clone();
        let mut theirs = expected.entries;
        let key = |e: &SdpaEntry| (e.matrix, e.block, e.row.min(e.col), e.row.max(e.col));
        ours.sort_by_key(key);
        theirs.sort_by_key(key);
        if ours.len() != theirs.len() || ours.iter().zip(&theirs).any(|(a, b)| key(a) != key(b) || a.value != b.value) {
            return fail("constraint matrices differ");
        }
        Ok(())
    }

    pub fn write(&self) -> Result<String, SdpaError> {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "\"{c}");
        }
        let _ = writeln!(out, "{}", self.objective.len());
        let _ = writeln!(out, "{}", self.block_struct.len());
        let sizes: Vec<String> = self.block_struct.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", sizes.join(" "));
        let c: Result<Vec<String>, SdpaError> = self.objective.iter().map(decimal).collect();
        let _ = writeln!(out, "{}", c?.join(" "));
        for e in &self.entries {
            let _ = writeln!(out, "{} {} {} {} {}", e.matrix, e.block, e.row, e.col, decimal(&e.value)?);
        }
        Ok(out)
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut comments = Vec::new();
        let mut lines = Vec::new();
        for (i, raw) in input.lines().enumerate() {
            let text = raw.trim_end();
            let t = text.trim_start();
            if lines.is_empty() && (t.starts_with('"') || t.starts_with('*')) {
                comments.push(t[1..].to_string());
            } else if !t.is_empty() {
                lines.push(Line { number: i + 1, text });
            }
        }
        let mut header = Tokens::new(&lines);
        // Text after the first token of these two lines is a comment.
        let m: usize = header.next_number("number of constraints")?;
        header.pending.clear();
        let nblocks: usize = header.next_number("number of blocks")?;
        header.pending.clear();
        let mut block_struct = Vec::with_capacity(nblocks);
        for _ in 0..nblocks {
            let size: i64 = header.next_number("block size")?;
            if size == 0 {
                return Err(header.last_error("block size 0"));
            }
            block_struct.push(size);
        }
        let mut objective = Vec::with_capacity(m);
        for _ in 0..m {
            objective.push(header.next_rational()?);
        }
        if let Some(&(off, tok)) = header.pending.last() {
            let line = lines[header.line_index() - 1];
            return Err(line.error(off, format!("unexpected `{tok}` after the objective vector")));
        }
        let mut entries = Vec::new();
        for line in &lines[header.line_index()..] {
            let toks = tokens(line);
            if toks.len() != 5 {
                return Err(line.error(line.indent(), "expected `matno blkno i j value`"));
            }
            let num = |k: usize, what: &str| -> Result<usize, ParseError> {
                let (off, t) = toks[k];
                t.parse().map_err(|_| line.error(off, format!("`{t}` is not a valid {what}")))
            };
            let matrix = num(0, "matrix number")?;
            let block = num(1, "block number")?;
            let row = num(2, "row")?;
            let col = num(3, "column")?;
            if matrix > m {
                return Err(line.error(toks[0].0, format!("matrix {matrix} beyond {m} constraints")));
            }
            if block == 0 || block > nblocks {
                return Err(line.error(toks[1].0, format!("block {block} out of range")));
            }
            let size = block_struct[block - 1].unsigned_abs() as usize;
            for (k, x) in [(2, row), (3, col)] {
                if x == 0 || x > size {
                    return Err(line.error(toks[k].0, format!("index {x} outside a block of size {size}")));
                }
            }
            if block_struct[block - 1] < 0 && row != col {
                return Err(line.error(toks[2].0, "off-diagonal entry in a diagonal block"));
            }
            let value = exact_decimal(toks[4].1).ok_or_else(|| line.error(toks[4].0, "invalid number"))?;
            entries.push(SdpaEntry { matrix, block, row, col, value });
        }
        Ok(Self { comments, block_struct, objective, entries })
    }
}

/// Whitespace- and punctuation-separated tokens with byte offsets; SDPA
/// allows `{`, `}`, `(`, `)` and `,` as separators.
fn tokens<'a>(line: &Line<'a>) -> Vec<(usize, &'a str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.text.char_indices() {
        let sep = ch.is_whitespace() || "{}(),".contains(ch);
        match (sep, start) {
            (true, Some(s)) => {
                out.push((s, &line.text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line.text[s..]));
    }
    out
}

/// Token stream over the header, which may spread values across lines.
struct Tokens<'a, 'b> {
    lines: &'b [Line<'a>],
    line: usize,
    pending: Vec<(usize, &'a str)>,
    last: Option<(Line<'a>, usize)>,
}

impl<'a, 'b> Tokens<'a, 'b> {
    fn new(lines: &'b [Line<'a>]) -> Self {
        Self { lines, line: 0, pending: Vec::new(), last: None }
    }

    fn next(&mut self) -> Result<(Line<'a>, usize, &'a str), ParseError> {
        while self.pending.is_empty() {
            let Some(line) = self.lines.get(self.line) else {
                let at = self.lines.last().map_or(1, |l| l.number);
                return Err(ParseError::new(at, 1, "unexpected end of file in the header"));
            };
            self.pending = tokens(line);
            self.pending.reverse();
            self.line += 1;
        }
        let (off, tok) = self.pending.pop().unwrap();
        let line = self.lines[self.line - 1];
        self.last = Some((line, off));
        Ok((line, off, tok))
    }

    fn next_number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let (line, off, tok) = self.next()?;
        tok.parse().map_err(|_| line.error(off, format!("`{tok}` is not a valid {what}")))
    }

    fn next_rational(&mut self) -> Result<Rational, ParseError> {
        let (line, off, tok) = self.next()?;
        exact_decimal(tok).ok_or_else(|| line.error(off, format!("`{tok}` is not a number")))
    }

    fn last_error(&self, message: &str) -> ParseError {
        match &self.last {
            Some((line, off)) => line.error(*off, message),
            None => ParseError::new(1, 1, message),
        }
    }

    /// Index of the first line after the header; the header must end on a line boundary.
    fn line_index(&self) -> usize {
        self.line
    }
}

/// Parses a decimal such as `-1.25e-3` exactly.
pub fn exact_decimal(token: &str) -> Option<Rational> {
    let (mantissa, exponent) = match token.find(['e', 'E', 'd', 'D']) {
        Some(i) => (&token[..i], token[i + 1..].parse::<i32>().ok()?),
        None => (token, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int}{frac}").parse().ok()?;
    let shift = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(all);
    if shift >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, shift.unsigned_abs() as usize));
    }
    Some(if negative { -value } else { value })
}

/// Exact decimal rendering; fails unless the denominator is `2^a 5^b`.
pub fn decimal(x: &Rational) -> Result<String, SdpaError> {
    if x.is_integer() {
        return Ok(x.numer().to_string());
    }
    let mut den = x.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut digits = 0usize;
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return Err(SdpaError::NotDecimal(x.clone()));
    }
    digits += twos.max(fives);
    let scaled = x * Rational::from_integer(num_traits::pow(BigInt::from(10), digits));
    let n = scaled.numer().abs().to_string();
    let n = format!("{n:0>width$}", width = digits + 1);
    let (int, frac) = n.split_at(n.len() - digits);
    let sign = if x.is_negative() { "-" } else { "" };
    Ok(format!("{sign}{int}.{frac}"))
}

/// A solver's answer in the CSDP layout: the `y` vector on the first line,
/// then `matno blkno i j value` lines with `matno` 1 for `Z` and 2 for `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpaSolution {
    pub y: Vec<f64>,
    /// `(block, row, col, value)`, 1-based, from matrix `X`.
    pub x: Vec<(usize, usize, usize, f64)>,
}

impl SdpaSolution {
    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let lines = content_lines(input);
        let Some(first) = lines.first() else {
            return Err(ParseError::new(1, 1, "empty solution file"));
        };
        let float = |line: &Line<'_>, off: usize, t: &str| -> Result<f64, ParseError> {
            t.replace(['d', 'D'], "e").parse().map_err(|_| line.error(off, format!("`{t}` is not a number")))
        };
        let y = tokens(first).into_iter().map(|(off, t)| float(first, off, t)).collect::<Result<_, _>>()?;
        let mut x = Vec::new();
        for line in &lines[1..] {
            let toks = tokens(line);
            if toks.len() != 5 {
                return Err(line.error(line.indent(), "expected `matno blkno i j value`"));
            }
            let idx = |k: usize| -> Result<usize, ParseError> {
                let (off, t) = toks[k];
                t.parse().map_err(|_| line.error(off, format!("`{t}` is not an index")))
            };
            let matrix = idx(0)?;
            if matrix == 2 {
                x.push((idx(1)?, idx(2)?, idx(3)?, float(line, toks[4].0, toks[4].1)?));
            } else if matrix != 1 {
                return Err(line.error(toks[0].0, "matrix number must be 1 or 2"));
            }
        }
        Ok(Self { y, x })
    }

    /// Builds a numeric solution for `problem`, undoing `scale`.
    pub fn to_numeric(&self, problem: &SdpProblem, scale: &Rational) -> Result<NumericSolution, SdpaError> {
        if self.y.len() != problem.constraints.len() {
            return Err(SdpaError::Mismatch(format!(
                "{} dual values for {} constraints",
                self.y.len(),
                problem.constraints.len()
            )));
        }
        let s = scale.to_f64().unwrap_or(1.0);
        let mut blocks: Vec<NumericBlock> = problem
            .blocks
            .iter()
            .map(|b| match b.kind {
                BlockKind::Dense => NumericBlock::Dense { n: b.size(), values: vec![0.0; b.size() * b.size()] },
                BlockKind::Diagonal => NumericBlock::Diagonal(vec![0.0; b.size()]),
            })
            .collect();
        for &(block, row, col, value) in &self.x {
            let slot = blocks
                .get_mut(block.wrapping_sub(1))
                .ok_or_else(|| SdpaError::Mismatch(format!("block {block} out of range")))?;
            let n = slot.size();
            if row == 0 || col == 0 || row > n || col > n {
                return Err(SdpaError::Mismatch(format!("entry ({row}, {col}) outside block {block}")));
            }
            let (i, j) = (row - 1, col - 1);
            match slot {
                NumericBlock::Dense { values, .. } => {
                    values[i * n + j] = value / s;
                    values[j * n + i] = value / s;
                }
                NumericBlock::Diagonal(d) if i == j => d[i] = value / s,
                NumericBlock::Diagonal(_) if value == 0.0 => {}
                NumericBlock::Diagonal(_) => {
                    return Err(SdpaError::Mismatch(format!("off-diagonal entry in diagonal block {block}")))
                }
            }
        }
        let mut num = NumericSolution {
            status: SolveStatus::NotConverged,
            blocks,
            dual: self.y.clone(),
            residual: 0.0,
            iterations: 0,
        };
        num.residual = num.residual_against(problem);
        if num.residual <= SolverOptions::default().feasibility_tolerance {
            num.status = SolveStatus::Feasible;
        }
        Ok(num)
    }
}
