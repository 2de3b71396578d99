//! The line-oriented quiver file format.
//!
//! ```text
//! # comment
//! vertices 2
//! valuation 1 1
//! arrow 1 2          # optional multiplicity: arrow 1 2 3
//! ```
//!
//! Instead of `arrow` lines, `R` can be given as an `rmatrix` block of `n`
//! rows, either on the following lines or inline with `;` between rows.
//! An optional `lambda` block of `2n` rows holds `2Λ`.

use std::fmt::{self, Write as _};

use hallcluster::matrix::IntMatrix;
use hallcluster::qtorus::SkewForm;
use hallcluster::ValuedQuiver;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverFile {
    pub quiver: ValuedQuiver,
    /// User-supplied form, if the file has a `lambda` block.
    pub lambda: Option<SkewForm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
        let boundary = ch.is_whitespace() || ch == ';';
        match (start, boundary) {
            (None, false) => start = Some(idx),
            (Some(s), true) => {
                out.push(Token {
                    text: &content[s..idx],
                    line: line_no,
                    column: content[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
        if ch == ';' && idx < content.len() {
            out.push(Token {
                text: ";",
                line: line_no,
                column: content[..idx].chars().count() + 1,
            });
        }
    }
    out
}

fn integer(tok: Token<'_>) -> Result<i64, ParseError> {
    tok.text
        .parse()
        .map_err(|_| err(tok.line, tok.column, format!("expected an integer, found `{}`", tok.text)))
}

struct Lines<'a> {
    lines: Vec<(usize, Vec<Token<'a>>)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, Vec<Token<'a>>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, tokenize(i + 1, l)))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        Self {
            last_line: text.lines().count().max(1),
            lines,
            pos: 0,
        }
    }

    fn next(&mut self) -> Option<(usize, Vec<Token<'a>>)> {
        let out = self.lines.get(self.pos).cloned();
        self.pos += 1;
        out
    }
}

/// Splits tokens into `;`-separated rows of integers.
fn rows_from(tokens: &[Token<'_>]) -> Result<Vec<Vec<i64>>, ParseError> {
    let mut rows = vec![Vec::new()];
    for &t in tokens {
        if t.text == ";" {
            rows.push(Vec::new());
        } else {
            rows.last_mut().expect("nonempty").push(integer(t)?);
        }
    }
    Ok(rows)
}

fn read_block(
    lines: &mut Lines<'_>,
    head: Token<'_>,
    inline: &[Token<'_>],
    rows: usize,
    cols: usize,
) -> Result<IntMatrix, ParseError> {
    let parsed = if inline.is_empty() {
        let mut out = Vec::with_capacity(rows);
        for _ in 0..rows {
            let Some((line, toks)) = lines.next() else {
                return Err(err(
                    lines.last_line,
                    1,
                    format!("`{}` block ended after {} of {rows} rows", head.text, out.len()),
                ));
            };
            if toks.iter().any(|t| t.text == ";") {
                return Err(err(line, 1, "`;` is only allowed in inline blocks"));
            }
            out.push((line, toks[0].column, rows_from(&toks)?.remove(0)));
        }
        out
    } else {
        let r = rows_from(inline)?;
        if r.len() != rows {
            return Err(err(
                head.line,
                head.column,
                format!("`{}` needs {rows} rows, found {}", head.text, r.len()),
            ));
        }
        r.into_iter().map(|row| (head.line, inline[0].column, row)).collect()
    };
    let mut data = Vec::with_capacity(rows);
    for (line, column, row) in parsed {
        if row.len() != cols {
            return Err(err(line, column, format!("row has {} entries, expected {cols}", row.len())));
        }
        data.push(row);
    }
    Ok(if rows == 0 {
        IntMatrix::zeros(0, cols)
    } else {
        IntMatrix::from_rows(&data)
    })
}

/// Parses and validates a quiver file.
pub fn parse_quiver_file(text: &str) -> Result<QuiverFile, ParseError> {
    let mut lines = Lines::new(text);
    let mut n: Option<(usize, Token<'_>)> = None;
    let mut valuation: Option<Vec<i64>> = None;
    let mut ext: Option<(IntMatrix, Token<'_>)> = None;
    let mut arrows: Vec<(usize, usize, i64, Token<'_>)> = Vec::new();
    let mut lambda: Option<(IntMatrix, Token<'_>)> = None;

    while let Some((_, toks)) = lines.next() {
        let head = toks[0];
        let args = &toks[1..];
        let need_n = |n: &Option<(usize, Token<'_>)>| {
            n.map(|(n, _)| n)
                .ok_or_else(|| err(head.line, head.column, "`vertices` must come first"))
        };
        match head.text {
            "vertices" => {
                if n.is_some() {
                    return Err(err(head.line, head.column, "duplicate `vertices`"));
                }
                let [count] = args else {
                    return Err(err(head.line, head.column, "usage: vertices <n>"));
                };
                let value = integer(*count)?;
                if value < 1 {
                    return Err(err(count.line, count.column, "need at least one vertex"));
                }
                n = Some((value as usize, head));
            }
            "valuation" => {
                let count = need_n(&n)?;
                if valuation.is_some() {
                    return Err(err(head.line, head.column, "duplicate `valuation`"));
                }
                if args.len() != count {
                    return Err(err(
                        head.line,
                        head.column,
                        format!("expected {count} valuations, found {}", args.len()),
                    ));
                }
                let mut values = Vec::with_capacity(count);
                for &t in args {
                    let d = integer(t)?;
                    if d < 1 {
                        return Err(err(t.line, t.column, "valuations must be positive"));
                    }
                    values.push(d);
                }
                valuation = Some(values);
            }
            "arrow" => {
                let count = need_n(&n)?;
                if ext.is_some() {
                    return Err(err(head.line, head.column, "cannot mix `arrow` with `rmatrix`"));
                }
                if !(2..=3).contains(&args.len()) {
                    return Err(err(head.line, head.column, "usage: arrow <i> <j> [mult]"));
                }
                let mut ends = [0usize; 2];
                for (slot, &t) in ends.iter_mut().zip(args) {
                    let v = integer(t)?;
                    if v < 1 || v as usize > count {
                        return Err(err(t.line, t.column, format!("vertex {v} out of range 1..={count}")));
                    }
                    *slot = v as usize - 1;
                }
                let mult = match args.get(2) {
                    Some(&t) => {
                        let m = integer(t)?;
                        if m < 1 {
                            return Err(err(t.line, t.column, "multiplicity must be positive"));
                        }
                        m
                    }
                    None => 1,
                };
                arrows.push((ends[0], ends[1], mult, head));
            }
            "rmatrix" => {
                let count = need_n(&n)?;
                if ext.is_some() {
                    return Err(err(head.line, head.column, "duplicate `rmatrix`"));
                }
                if let Some(&(_, _, _, a)) = arrows.first() {
                    return Err(err(head.line, head.column, format!("cannot mix `rmatrix` with `arrow` (line {})", a.line)));
                }
                ext = Some((read_block(&mut lines, head, args, count, count)?, head));
            }
            "lambda" => {
                let count = need_n(&n)?;
                if lambda.is_some() {
                    return Err(err(head.line, head.column, "duplicate `lambda`"));
                }
                lambda = Some((read_block(&mut lines, head, args, 2 * count, 2 * count)?, head));
            }
            other => {
                return Err(err(head.line, head.column, format!("unknown directive `{other}`")));
            }
        }
    }

    let Some((count, vertices_tok)) = n else {
        return Err(err(lines.last_line, 1, "missing `vertices`"));
    };
    let valuations = valuation.unwrap_or_else(|| vec![1; count]);
    let (r, anchor) = match ext {
        Some((r, tok)) => (r, tok),
        None => {
            if let Some(&(_, _, _, tok)) = arrows.first() {
                if valuations.iter().any(|&d| d != 1) {
                    return Err(err(tok.line, tok.column, "`arrow` needs all valuations equal to 1; use `rmatrix`"));
                }
            }
            let mut r = vec![vec![0i64; count]; count];
            for &(s, t, m, _) in &arrows {
                r[t][s] += m;
            }
            let anchor = arrows.first().map(|a| a.3).unwrap_or(vertices_tok);
            (IntMatrix::from_rows(&r), anchor)
        }
    };
    let quiver = ValuedQuiver::new(valuations, r).map_err(|e| err(anchor.line, anchor.column, e.to_string()))?;
    let lambda = match lambda {
        Some((m, tok)) => Some(
            SkewForm::from_doubled(m).map_err(|e| err(tok.line, tok.column, e.to_string()))?,
        ),
        None => None,
    };
    Ok(QuiverFile { quiver, lambda })
}

fn write_rows(out: &mut String, m: &IntMatrix) {
    for row in m.to_rows() {
        let row: Vec<String> = row.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

/// Renders a file that parses back to `file`.
pub fn render_quiver_file(file: &QuiverFile) -> String {
    let q = &file.quiver;
    let mut out = String::new();
    let _ = writeln!(out, "vertices {}", q.n());
    let vals: Vec<String> = q.valuations().iter().map(i64::to_string).collect();
    let _ = writeln!(out, "valuation {}", vals.join(" "));
    if q.is_trivially_valued() {
        for s in 0..q.n() {
            for t in 0..q.n() {
                match q.ext()[(t, s)] {
                    0 => {}
                    1 => {
                        let _ = writeln!(out, "arrow {} {}", s + 1, t + 1);
                    }
                    m => {
                        let _ = writeln!(out, "arrow {} {} {m}", s + 1, t + 1);
                    }
                }
            }
        }
    } else {
        out.push_str("rmatrix\n");
        write_rows(&mut out, q.ext());
    }
    if let Some(l) = &file.lambda {
        out.push_str("lambda\n");
        write_rows(&mut out, l.doubled());
    }
    out
}

impl fmt::Display for QuiverFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_quiver_file(self))
    }
}
