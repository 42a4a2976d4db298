//! The `.loop` text format and its JSON mirror.
//!
//! ```text
//! 3
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```
//!
//! Line 1 holds the order `n`, followed by `n` rows of `n` space-separated
//! entries (row `x` lists `x·y` for `y = 0..n`). Output is canonical: single
//! spaces, no trailing whitespace, LF after every line. The JSON mirror is
//! `{"n":3,"table":[[0,1,2],[1,2,0],[2,0,1]]}`. An archive is a sequence of
//! `.loop` blocks separated by one blank line.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};
use crate::loops::{from_table, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
}

pub fn write_loop_text(rows: &[Vec<usize>]) -> String {
    let mut out = String::new();
    writeln!(out, "{}", rows.len()).unwrap();
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            write!(out, "{v}").unwrap();
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn write_loop_json(rows: &[Vec<usize>]) -> String {
    serde_json::to_string(&TableJson {
        n: rows.len(),
        table: rows.to_vec(),
    })
    .expect("table serializes")
}

/// Parses the text format into a grid. Whitespace between entries is
/// tolerated on input; structural validation is left to [`from_table`].
pub fn parse_loop_text(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| LoopError::Parse("missing order line".into()))?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| LoopError::Parse(format!("bad order line `{header}`")))?;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| LoopError::Parse(format!("expected {n} rows, found {i}")))?;
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| LoopError::Parse(format!("bad entry `{tok}` in row {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if let Some(extra) = lines.next() {
        return Err(LoopError::Parse(format!("trailing content `{extra}`")));
    }
    Ok(rows)
}

pub fn parse_loop_json(text: &str) -> Result<Vec<Vec<usize>>> {
    let parsed: TableJson = serde_json::from_str(text)?;
    if parsed.table.len() != parsed.n {
        return Err(LoopError::Parse(format!(
            "n = {} but table has {} rows",
            parsed.n,
            parsed.table.len()
        )));
    }
    Ok(parsed.table)
}

/// Accepts either format, choosing JSON when the first non-blank byte is `{`.
pub fn parse_any(text: &str) -> Result<Structure> {
    let rows = if text.trim_start().starts_with('{') {
        parse_loop_json(text)?
    } else {
        parse_loop_text(text)?
    };
    from_table(&rows)
}

pub fn read_structure(path: impl AsRef<Path>) -> Result<Structure> {
    parse_any(&std::fs::read_to_string(path)?)
}

pub fn write_archive<'a, I>(tables: I) -> String
where
    I: IntoIterator<Item = &'a [Vec<usize>]>,
{
    tables
        .into_iter()
        .map(write_loop_text)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn parse_archive(text: &str) -> Result<Vec<Structure>> {
    text.split("\n\n")
        .filter(|block| !block.trim().is_empty())
        .map(|block| from_table(&parse_loop_text(block)?))
        .collect()
}
