//! The `sudoku v1` text format and grid rendering.
//!
//! ```text
//! sudoku v1
//! n = 4
//! perm pi1 = classical m=2
//! perm pi2 = classical m=2
//! perm pi3 = [1 2 5 6 3 4 7 8 9 10 13 14 11 12 15 16]
//! given 1 3
//! grid
//! . . | . .
//! . . | 2 .
//! . . | . .
//! . 4 | . .
//! ```
//!
//! `#` starts a comment. A `grid` block holds the next `n` rows of the grid in
//! row-major cell order; `|`, `-` and `+` are ignored, `.` and `0` mark empty
//! cells. For `n ≤ 9` every other character is one symbol, above that symbols
//! are whitespace separated.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::feasibility::Assignment;
use crate::model::{classical_permutations, Givens, Permutation, Puzzle, PuzzleOrder};

pub const FORMAT_HEADER: &str = "sudoku v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermSpec {
    /// Rows, columns or blocks of an `m² × m²` grid, depending on the slot.
    Classical { m: usize },
    /// 1-based image list.
    Explicit(Vec<usize>),
}

/// A parsed document before model validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuzzleDocument {
    pub n: usize,
    pub perms: [PermSpec; 3],
    /// Givens in document order.
    pub givens: Vec<(usize, u32)>,
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head).trim()
}

fn is_separator(c: char) -> bool {
    matches!(c, '|' | '-' | '+')
}

/// Symbols of one grid row; `None` when the line holds only separators.
fn grid_row(line: &str, n: usize, lineno: usize) -> Result<Option<Vec<u32>>> {
    let mut row = Vec::new();
    let mut symbol = |s: &str| -> Result<()> {
        match s {
            "." | "0" => row.push(0),
            _ => {
                let v: u32 = s
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad grid symbol `{s}`")))?;
                if v as usize > n {
                    return Err(Error::parse(lineno, format!("value {v} outside 1..={n}")));
                }
                row.push(v);
            }
        }
        Ok(())
    };
    if n <= 9 {
        let mut buf = [0u8; 4];
        for c in line
            .chars()
            .filter(|&c| !c.is_whitespace() && !is_separator(c))
        {
            symbol(c.encode_utf8(&mut buf))?;
        }
    } else {
        for token in line
            .split_whitespace()
            .filter(|t| !t.chars().all(is_separator))
        {
            symbol(token)?;
        }
    }
    if row.is_empty() {
        return Ok(None);
    }
    if row.len() != n {
        return Err(Error::parse(
            lineno,
            format!("grid row has {} symbols, expected {n}", row.len()),
        ));
    }
    Ok(Some(row))
}

fn parse_usize(s: &str, lineno: usize, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(lineno, format!("expected {what}, found `{}`", s.trim())))
}

fn parse_perm_spec(rhs: &str, n: usize, lineno: usize) -> Result<PermSpec> {
    if let Some(rest) = rhs.strip_prefix("classical") {
        let rest = rest.trim();
        let m = if rest.is_empty() {
            (1..=n)
                .find(|m| m * m == n)
                .ok_or_else(|| Error::parse(lineno, format!("n = {n} is not a square")))?
        } else {
            let value = rest
                .strip_prefix("m")
                .and_then(|r| r.trim_start().strip_prefix('='))
                .ok_or_else(|| Error::parse(lineno, "expected `classical m=<m>`"))?;
            parse_usize(value, lineno, "block size m")?
        };
        if m.checked_mul(m) != Some(n) {
            return Err(Error::parse(
                lineno,
                format!("classical m={m} needs n = m², got n = {n}"),
            ));
        }
        return Ok(PermSpec::Classical { m });
    }
    let inner = rhs
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::parse(lineno, "expected `classical m=<m>` or `[i1 … in²]`"))?;
    let images = inner
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_usize(t, lineno, "cell index"))
        .collect::<Result<Vec<_>>>()?;
    if images.len() != n * n {
        return Err(Error::parse(
            lineno,
            format!(
                "permutation has {} images, expected n² = {}",
                images.len(),
                n * n
            ),
        ));
    }
    Permutation::from_images(images.clone()).map_err(|e| Error::parse(lineno, e.to_string()))?;
    Ok(PermSpec::Explicit(images))
}

fn require_n(sink: &mut Option<GivenSink>, lineno: usize) -> Result<&mut GivenSink> {
    sink.as_mut()
        .ok_or_else(|| Error::parse(lineno, "`n = <int>` must come first"))
}

fn next_content<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Option<(usize, &'a str)> {
    lines.find(|(_, l)| !l.is_empty())
}

struct GivenSink {
    n: usize,
    givens: Vec<(usize, u32)>,
    /// Line of the given for each cell, 0 when absent.
    line_of: Vec<usize>,
}

impl GivenSink {
    fn add(&mut self, cell: usize, value: u32, lineno: usize) -> Result<()> {
        let n = self.n;
        if cell == 0 || cell > n * n {
            return Err(Error::parse(
                lineno,
                format!("cell {cell} outside 1..={}", n * n),
            ));
        }
        if value == 0 || value as usize > n {
            return Err(Error::parse(
                lineno,
                format!("value {value} outside 1..={n}"),
            ));
        }
        if self.line_of[cell] != 0 {
            return Err(Error::parse(
                lineno,
                format!("cell {cell} already given on line {}", self.line_of[cell]),
            ));
        }
        self.line_of[cell] = lineno;
        self.givens.push((cell, value));
        Ok(())
    }
}

impl PuzzleDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, strip_comment(l)));
        let last_line = text.lines().count().max(1);

        match next_content(&mut lines) {
            Some((_, FORMAT_HEADER)) => {}
            Some((lineno, other)) => {
                return Err(Error::parse(
                    lineno,
                    format!("expected `{FORMAT_HEADER}`, found `{other}`"),
                ))
            }
            None => return Err(Error::parse(1, "empty document")),
        }

        let mut sink: Option<GivenSink> = None;
        let mut perms: [Option<PermSpec>; 3] = Default::default();
        let mut seen_grid = false;

        while let Some((lineno, line)) = next_content(&mut lines) {
            if let Some((lhs, rhs)) = line.split_once('=') {
                let (lhs, rhs) = (lhs.trim(), rhs.trim());
                if lhs == "n" {
                    if sink.is_some() {
                        return Err(Error::parse(lineno, "`n` defined twice"));
                    }
                    let n = parse_usize(rhs, lineno, "an order")?;
                    if !(2..=crate::model::MAX_ORDER).contains(&n) {
                        return Err(Error::parse(lineno, format!("order {n} outside 2..=64")));
                    }
                    sink = Some(GivenSink {
                        n,
                        givens: Vec::new(),
                        line_of: vec![0; n * n + 1],
                    });
                    continue;
                }
                if let Some(slot) = lhs.strip_prefix("perm").map(str::trim) {
                    let n = require_n(&mut sink, lineno)?.n;
                    let r = match slot {
                        "pi1" => 0,
                        "pi2" => 1,
                        "pi3" => 2,
                        _ => {
                            return Err(Error::parse(
                                lineno,
                                format!("unknown permutation `{slot}`"),
                            ))
                        }
                    };
                    if perms[r].is_some() {
                        return Err(Error::parse(lineno, format!("`{slot}` defined twice")));
                    }
                    perms[r] = Some(parse_perm_spec(rhs, n, lineno)?);
                    continue;
                }
                return Err(Error::parse(lineno, format!("unknown key `{lhs}`")));
            }

            let mut words = line.split_whitespace();
            match words.next() {
                Some("given") => {
                    let sink = require_n(&mut sink, lineno)?;
                    let args: Vec<&str> = words.collect();
                    if args.len() != 2 {
                        return Err(Error::parse(lineno, "expected `given <cell> <value>`"));
                    }
                    let cell = parse_usize(args[0], lineno, "a cell")?;
                    let value = parse_usize(args[1], lineno, "a value")?;
                    let value = u32::try_from(value)
                        .map_err(|_| Error::parse(lineno, format!("value {value} out of range")))?;
                    sink.add(cell, value, lineno)?;
                }
                Some("grid") if words.next().is_none() => {
                    let sink = require_n(&mut sink, lineno)?;
                    if seen_grid {
                        return Err(Error::parse(lineno, "second `grid` block"));
                    }
                    seen_grid = true;
                    let n = sink.n;
                    let mut rows = 0;
                    let mut last = lineno;
                    while rows < n {
                        let (row_line, text) = next_content(&mut lines).ok_or_else(|| {
                            Error::parse(last, format!("grid ended after {rows} of {n} rows"))
                        })?;
                        last = row_line;
                        let Some(row) = grid_row(text, n, row_line)? else {
                            continue;
                        };
                        for (k, &v) in row.iter().enumerate() {
                            if v != 0 {
                                sink.add(rows * n + k + 1, v, row_line)?;
                            }
                        }
                        rows += 1;
                    }
                }
                _ => return Err(Error::parse(lineno, format!("unrecognized line `{line}`"))),
            }
        }

        let sink = sink.ok_or_else(|| Error::parse(last_line, "missing `n = <int>`"))?;
        let mut specs = Vec::with_capacity(3);
        for (r, entry) in perms.into_iter().enumerate() {
            specs.push(
                entry.ok_or_else(|| Error::parse(last_line, format!("missing `perm pi{}`", r + 1)))?,
            );
        }
        Ok(PuzzleDocument {
            n: sink.n,
            perms: specs.try_into().expect("three slots"),
            givens: sink.givens,
        })
    }

    pub fn to_puzzle(&self) -> Result<Puzzle> {
        let order = PuzzleOrder::new(self.n)?;
        let mut perms = Vec::with_capacity(3);
        for (r, entry) in self.perms.iter().enumerate() {
            perms.push(match entry {
                PermSpec::Classical { m } => classical_permutations(*m)?[r].clone(),
                PermSpec::Explicit(images) => Permutation::from_images(images.clone())?,
            });
        }
        let perms: [Permutation; 3] = perms.try_into().expect("three slots");
        Puzzle::new(order, perms, Givens::new(self.givens.clone(), order)?)
    }

    /// The canonical document of a puzzle: classical slots are named, givens go
    /// into a `grid` block.
    pub fn from_puzzle(puzzle: &Puzzle) -> Self {
        let n = puzzle.n();
        let m = (1..=n).find(|m| m * m == n);
        let classical = m.and_then(|m| classical_permutations(m).ok());
        let perms = std::array::from_fn(|r| match (&classical, m) {
            (Some(c), Some(m)) if c[r] == *puzzle.perm(r + 1) => PermSpec::Classical { m },
            _ => PermSpec::Explicit(puzzle.perm(r + 1).images().to_vec()),
        });
        PuzzleDocument {
            n,
            perms,
            givens: puzzle.givens().pairs().to_vec(),
        }
    }
}

impl fmt::Display for PuzzleDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{FORMAT_HEADER}")?;
        writeln!(f, "n = {}", self.n)?;
        for (r, entry) in self.perms.iter().enumerate() {
            write!(f, "perm pi{} = ", r + 1)?;
            match entry {
                PermSpec::Classical { m } => writeln!(f, "classical m={m}")?,
                PermSpec::Explicit(images) => {
                    let list: Vec<String> = images.iter().map(usize::to_string).collect();
                    writeln!(f, "[{}]", list.join(" "))?;
                }
            }
        }
        if self.givens.is_empty() {
            return Ok(());
        }
        let mut values = vec![0u32; self.n * self.n];
        for &(cell, v) in &self.givens {
            values[cell - 1] = v;
        }
        let block = match self.perms {
            [PermSpec::Classical { m }, PermSpec::Classical { .. }, PermSpec::Classical { .. }] => {
                Some(m)
            }
            _ => None,
        };
        writeln!(f, "grid")?;
        f.write_str(&grid_lines(self.n, block, &values))
    }
}

/// Parses and validates a puzzle document.
pub fn parse_puzzle(text: &str) -> Result<Puzzle> {
    PuzzleDocument::parse(text)?.to_puzzle()
}

/// Writes the canonical document of a puzzle.
pub fn write_puzzle(puzzle: &Puzzle) -> String {
    PuzzleDocument::from_puzzle(puzzle).to_string()
}

/// Reads a complete assignment of order `n`, either as a document whose givens
/// cover every cell or as `n` bare grid rows.
pub fn parse_assignment(text: &str, n: usize) -> Result<Assignment> {
    let first = text
        .lines()
        .map(strip_comment)
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::parse(1, "empty assignment"))?;
    let values = if first == FORMAT_HEADER {
        let doc = PuzzleDocument::parse(text)?;
        if doc.n != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: doc.n,
            });
        }
        let mut values = vec![0u32; n * n];
        for (cell, v) in doc.givens {
            values[cell - 1] = v;
        }
        values
    } else {
        let mut values = Vec::with_capacity(n * n);
        for (k, line) in text.lines().enumerate() {
            if let Some(row) = grid_row(strip_comment(line), n, k + 1)? {
                values.extend(row);
            }
        }
        if values.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {n} grid rows, found {}",
                values.len() / n
            )));
        }
        values
    };
    if let Some(k) = values.iter().position(|&v| v == 0) {
        return Err(Error::invalid(format!("cell {} has no value", k + 1)));
    }
    Ok(Assignment::new(values))
}

fn symbol_width(n: usize) -> usize {
    if n <= 9 {
        1
    } else {
        n.to_string().len()
    }
}

fn grid_lines(n: usize, block: Option<usize>, values: &[u32]) -> String {
    let width = symbol_width(n);
    let mut out = String::new();
    for row in values.chunks(n) {
        for (k, &v) in row.iter().enumerate() {
            if k > 0 {
                out.push(' ');
                if block.is_some_and(|m| k % m == 0) {
                    out.push_str("| ");
                }
            }
            if v == 0 {
                let _ = write!(out, "{:>width$}", ".");
            } else {
                let _ = write!(out, "{v:>width$}");
            }
        }
        out.push('\n');
    }
    out
}

fn listing(n: usize, values: &[u32]) -> String {
    let mut out = String::new();
    for (r, row) in values.chunks(n).enumerate() {
        let entries: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let cell = r * n + k + 1;
                if v == 0 {
                    format!("{cell}:.")
                } else {
                    format!("{cell}:{v}")
                }
            })
            .collect();
        out.push_str(&entries.join(" "));
        out.push('\n');
    }
    out
}

fn render_values(puzzle: &Puzzle, values: &[u32]) -> String {
    match puzzle.classical_block_size() {
        Some(m) => grid_lines(puzzle.n(), Some(m), values),
        None => listing(puzzle.n(), values),
    }
}

/// The givens of a puzzle as a grid, or as an `index:value` listing when the
/// constraint sets are not the rows, columns and blocks of a square grid.
pub fn render_grid(puzzle: &Puzzle) -> String {
    let mut values = vec![0u32; puzzle.cells()];
    for &(cell, v) in puzzle.givens().pairs() {
        values[cell - 1] = v;
    }
    render_values(puzzle, &values)
}

/// Same layout as [`render_grid`] for a full or partial assignment.
pub fn render_assignment(puzzle: &Puzzle, x: &Assignment) -> Result<String> {
    if x.len() != puzzle.cells() {
        return Err(Error::DimensionMismatch {
            expected: puzzle.cells(),
            actual: x.len(),
        });
    }
    Ok(render_values(puzzle, x.values()))
}
