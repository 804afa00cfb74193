//! Frozen-set files.
//!
//! ```text
//! 16 8
//! 0 1 2 3 4 5 6 8
//! ```
//!
//! Line 1 holds the length `n` and the dimension `k`; line 2 holds the
//! `n − k` frozen indices in strictly increasing order (it may be empty or
//! absent when `k = n`). Errors report the 1-based line and column of the
//! offending token.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::transform::{log2_exact, CodeSpec};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - line.as_ptr() as usize + 1, tok))
}

fn parse_index(line: usize, column: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| {
        parse_error(
            line,
            column,
            format!("'{tok}' is not a non-negative integer"),
        )
    })
}

/// Parses the contents of a frozen-set file.
pub fn parse_frozen(text: &str) -> Result<CodeSpec> {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines.first().copied().unwrap_or("");
    let head: Vec<(usize, &str)> = tokens(header).collect();
    if head.len() != 2 {
        let column = head.get(2).map_or(header.len() + 1, |&(c, _)| c);
        return Err(parse_error(1, column, "expected exactly two values 'n k'"));
    }
    let n = parse_index(1, head[0].0, head[0].1)?;
    let k = parse_index(1, head[1].0, head[1].1)?;
    if log2_exact(n).is_err() || n < 2 {
        return Err(parse_error(
            1,
            head[0].0,
            format!("length {n} is not a power of two ≥ 2"),
        ));
    }
    if k > n {
        return Err(parse_error(
            1,
            head[1].0,
            format!("dimension {k} exceeds length {n}"),
        ));
    }
    let body = lines.get(1).copied().unwrap_or("");
    let mut frozen = Vec::with_capacity(n - k);
    for (column, tok) in tokens(body) {
        let index = parse_index(2, column, tok)?;
        if index >= n {
            return Err(parse_error(
                2,
                column,
                format!("index {index} is not below {n}"),
            ));
        }
        if frozen.last().is_some_and(|&last| index <= last) {
            return Err(parse_error(
                2,
                column,
                "indices must be strictly increasing",
            ));
        }
        frozen.push(index);
    }
    if frozen.len() != n - k {
        return Err(parse_error(
            2,
            body.len() + 1,
            format!("expected {} frozen indices, found {}", n - k, frozen.len()),
        ));
    }
    if let Some((offset, line)) = lines
        .iter()
        .enumerate()
        .skip(2)
        .find(|(_, l)| !l.trim().is_empty())
    {
        let column = tokens(line).next().map_or(1, |(c, _)| c);
        return Err(parse_error(
            offset + 1,
            column,
            "unexpected content after the index line",
        ));
    }
    CodeSpec::from_frozen(n, &frozen)
}

/// Renders a specification in the frozen-set file format.
pub fn format_frozen(spec: &CodeSpec) -> String {
    let indices: Vec<String> = spec.frozen().iter().map(usize::to_string).collect();
    format!("{} {}\n{}\n", spec.n(), spec.k(), indices.join(" "))
}

pub fn read_frozen(path: &Path) -> Result<CodeSpec> {
    parse_frozen(&fs::read_to_string(path)?)
}

pub fn write_frozen(path: &Path, spec: &CodeSpec) -> Result<()> {
    fs::write(path, format_frozen(spec))?;
    Ok(())
}
