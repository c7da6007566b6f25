//! Plain-text matrix and graph files.
//!
//! ```text
//! # rectangular matrix: header "m n", then m rows
//! 2 3
//! 1 0 2
//! 1/2 1 0
//!
//! # symmetric zero-diagonal matrix: header "m", then m full rows
//! 3
//! 0 1 2
//! 1 0 0
//! 2 0 0
//!
//! # graph: "v <count>", then one "e u v w" line per edge
//! v 4
//! e 1 2 1
//! e 2 3 5/2
//! ```
//!
//! Entries are integers or `p/q` rationals. Lines whose first non-blank
//! character is `#` and blank lines are ignored.

use crate::enumerate::WeightedGraph;
use crate::matrix::{NonnegMatrix, SymZeroDiagMatrix};
use crate::{Error, ExactNumber, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Matrix(NonnegMatrix),
    Symmetric(SymZeroDiagMatrix),
    Graph(WeightedGraph),
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_count(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a count, got {tok:?}")))
}

fn parse_entry(tok: &str, line: usize) -> Result<ExactNumber> {
    tok.parse::<ExactNumber>()
        .map_err(|_| parse_err(line, format!("expected an integer or p/q, got {tok:?}")))
}

pub fn parse_input(text: &str) -> Result<Input> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let head: Vec<&str> = header.split_whitespace().collect();

    if head.first() == Some(&"v") {
        if head.len() != 2 {
            return Err(parse_err(hline, "graph header is \"v <count>\""));
        }
        let n = parse_count(head[1], hline)?;
        let mut edges = Vec::new();
        for (ln, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.first() != Some(&"e") || toks.len() != 4 {
                return Err(parse_err(ln, "edge lines are \"e u v w\""));
            }
            edges.push((
                parse_count(toks[1], ln)?,
                parse_count(toks[2], ln)?,
                parse_entry(toks[3], ln)?,
            ));
        }
        return WeightedGraph::new(n, edges)
            .map(Input::Graph)
            .map_err(|e| parse_err(hline, e.to_string()));
    }

    let (rows, cols, symmetric) = match head[..] {
        [m] => {
            let m = parse_count(m, hline)?;
            (m, m, true)
        }
        [m, n] => (parse_count(m, hline)?, parse_count(n, hline)?, false),
        _ => {
            return Err(parse_err(
                hline,
                "header is \"m n\", \"m\" or \"v <count>\"",
            ))
        }
    };
    if cols == 0 && !symmetric {
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "a matrix with no columns has no row lines"));
        }
        return Ok(Input::Matrix(NonnegMatrix::zeros(rows, 0)));
    }
    let mut data = Vec::with_capacity(rows);
    let mut last = hline;
    for (ln, l) in lines {
        if data.len() == rows {
            return Err(parse_err(ln, format!("expected {rows} rows, found more")));
        }
        let row = l
            .split_whitespace()
            .map(|t| parse_entry(t, ln))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != cols {
            return Err(parse_err(
                ln,
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        data.push(row);
        last = ln;
    }
    if data.len() != rows {
        return Err(parse_err(
            last,
            format!("expected {rows} rows, found {}", data.len()),
        ));
    }
    let built = if symmetric {
        SymZeroDiagMatrix::from_rows(data).map(Input::Symmetric)
    } else if rows == 0 {
        Ok(Input::Matrix(NonnegMatrix::zeros(0, cols)))
    } else {
        NonnegMatrix::from_rows(data).map(Input::Matrix)
    };
    built.map_err(|e| parse_err(hline, e.to_string()))
}

pub fn write_matrix(b: &NonnegMatrix) -> String {
    let mut out = format!("{} {}\n", b.rows(), b.cols());
    for i in 0..b.rows() {
        let row: Vec<String> = b.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_symmetric(a: &SymZeroDiagMatrix) -> String {
    let mut out = format!("{}\n", a.order());
    for row in a.to_rows() {
        let row: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
