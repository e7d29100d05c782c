//! The defining matrix of a Bott tower.
//!
//! A Bott tower of height `r` is determined by a strictly upper-triangular
//! integer matrix: for every pair `1 <= i < j <= r` an integer `beta[i][j]`
//! recording the twist of stage `j` over stage `i`. [`BottMatrix`] stores
//! exactly these entries (zeros are normalized away), so two matrices compare
//! equal iff they define the same tower.
//!
//! Two interchange formats are supported:
//!
//! * **Text** — line 1 holds the height `r`; line `1 + i` holds the `r - i`
//!   entries `beta[i][i+1] ... beta[i][r]` of row `i`, whitespace-separated.
//!   Row `r` is empty and therefore omitted. Blank lines and lines starting
//!   with `#` are ignored.
//! * **JSON** — an object `{"r": 7, "beta": [[i, j, b], ...]}` listing the
//!   nonzero entries as triples. Entries may appear in any order but must
//!   not repeat.
//!
//! [`BottMatrix::parse`] sniffs the format (a document whose first
//! significant character is `{` is JSON), and the writers [`BottMatrix::to_text`]
//! and [`BottMatrix::to_json`] round-trip losslessly through the parsers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static ZERO: LazyLock<BigInt> = LazyLock::new(BigInt::default);

/// Strictly upper-triangular integer matrix defining a Bott tower of
/// height `r`.
///
/// Only nonzero entries are stored; [`BottMatrix::beta`] reports absent
/// entries as zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottMatrix {
    r: usize,
    beta: BTreeMap<(usize, usize), BigInt>,
}

impl BottMatrix {
    /// Builds a matrix from explicit entries.
    ///
    /// Zero entries are dropped. Indices are 1-based.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidMatrix`] if `r < 1` or any key violates
    /// `1 <= i < j <= r`.
    pub fn new(r: usize, entries: BTreeMap<(usize, usize), BigInt>) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidMatrix(
                "tower height must be at least 1, got 0".into(),
            ));
        }
        let mut beta = BTreeMap::new();
        for ((i, j), value) in entries {
            if !(1 <= i && i < j && j <= r) {
                return Err(Error::InvalidMatrix(format!(
                    "beta entry ({i}, {j}): indices must satisfy 1 <= i < j <= r (r = {r})"
                )));
            }
            if value != *ZERO {
                beta.insert((i, j), value);
            }
        }
        Ok(Self { r, beta })
    }

    /// Convenience constructor from row slices of machine integers.
    ///
    /// `rows[i - 1]` must hold the `r - i` entries of row `i`, so the height
    /// is `rows.len() + 1`.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidMatrix`] if some row has the wrong number of entries.
    pub fn from_rows_i64(rows: &[&[i64]]) -> Result<Self> {
        let r = rows.len() + 1;
        let mut beta = BTreeMap::new();
        for (idx, row) in rows.iter().enumerate() {
            let i = idx + 1;
            if row.len() != r - i {
                return Err(Error::InvalidMatrix(format!(
                    "row {i}: expected {} {}, got {}",
                    r - i,
                    entries_word(r - i),
                    row.len()
                )));
            }
            for (off, &value) in row.iter().enumerate() {
                beta.insert((i, i + 1 + off), BigInt::from(value));
            }
        }
        Self::new(r, beta)
    }

    /// Height of the tower (dimension of the variety).
    pub fn r(&self) -> usize {
        self.r
    }

    /// Entry `beta[i][j]` for `1 <= i < j <= r`; zero when the entry is
    /// not stored.
    ///
    /// # Panics
    ///
    /// Panics if the indices are not strictly upper-triangular in range —
    /// callers index the matrix structurally, so a bad pair is a bug.
    pub fn beta(&self, i: usize, j: usize) -> &BigInt {
        assert!(
            1 <= i && i < j && j <= self.r,
            "beta({i}, {j}) out of range for r = {}",
            self.r
        );
        self.beta.get(&(i, j)).unwrap_or(&ZERO)
    }

    /// Iterates over the stored (nonzero) entries in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.beta.iter().map(|(&(i, j), b)| (i, j, b))
    }

    /// Parses either interchange format, sniffing by the first significant
    /// character.
    ///
    /// # Errors
    ///
    /// See [`BottMatrix::parse_text`] and [`BottMatrix::parse_json`].
    pub fn parse(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            Self::parse_json(input)
        } else {
            Self::parse_text(input)
        }
    }

    /// Parses the whitespace-separated text format.
    ///
    /// # Errors
    ///
    /// [`Error::MatrixSyntax`] with a 1-based line (and where possible
    /// column) for malformed tokens, a height below 1, rows with the wrong
    /// entry count, missing rows, or trailing content.
    pub fn parse_text(input: &str) -> Result<Self> {
        let significant: Vec<(usize, &str)> = input
            .lines()
            .enumerate()
            .map(|(k, line)| (k + 1, line))
            .filter(|(_, line)| {
                let body = line.trim_start();
                !body.is_empty() && !body.starts_with('#')
            })
            .collect();

        let Some(&(height_line, height_text)) = significant.first() else {
            return Err(Error::MatrixSyntax {
                line: 1,
                column: None,
                message: "empty input: expected the tower height on line 1".into(),
            });
        };

        let height_tokens = tokens_with_columns(height_text);
        if height_tokens.len() > 1 {
            return Err(Error::MatrixSyntax {
                line: height_line,
                column: Some(height_tokens[1].0),
                message: format!(
                    "expected a single tower height, got {} tokens",
                    height_tokens.len()
                ),
            });
        }
        let (height_column, height_token) = height_tokens[0];
        let r = match height_token.parse::<usize>() {
            Ok(0) => {
                return Err(Error::MatrixSyntax {
                    line: height_line,
                    column: Some(height_column),
                    message: "tower height must be at least 1, got 0".into(),
                });
            }
            Ok(r) => r,
            Err(_) => {
                let message = match height_token.parse::<i64>() {
                    Ok(v) if v < 1 => format!("tower height must be at least 1, got {v}"),
                    _ => format!("invalid tower height '{height_token}'"),
                };
                return Err(Error::MatrixSyntax {
                    line: height_line,
                    column: Some(height_column),
                    message,
                });
            }
        };

        let mut beta = BTreeMap::new();
        let mut rows = significant[1..].iter();
        let mut last_line = height_line;
        for i in 1..r {
            let expected = r - i;
            let Some(&(line, text)) = rows.next() else {
                return Err(Error::MatrixSyntax {
                    line: last_line + 1,
                    column: None,
                    message: format!(
                        "unexpected end of input: expected row {i} with {expected} {}",
                        entries_word(expected)
                    ),
                });
            };
            last_line = line;
            let tokens = tokens_with_columns(text);
            if tokens.len() != expected {
                return Err(Error::MatrixSyntax {
                    line,
                    column: None,
                    message: format!(
                        "row {i}: expected {expected} {}, got {}",
                        entries_word(expected),
                        tokens.len()
                    ),
                });
            }
            for (off, &(column, token)) in tokens.iter().enumerate() {
                let value = BigInt::from_str(token).map_err(|_| Error::MatrixSyntax {
                    line,
                    column: Some(column),
                    message: format!("row {i}: invalid integer '{token}'"),
                })?;
                if value != *ZERO {
                    beta.insert((i, i + 1 + off), value);
                }
            }
        }
        if let Some(&(line, _)) = rows.next() {
            return Err(Error::MatrixSyntax {
                line,
                column: None,
                message: format!(
                    "unexpected content after the final row (a height-{r} tower has {} data {})",
                    r - 1,
                    if r == 2 { "row" } else { "rows" }
                ),
            });
        }
        Self::new(r, beta)
    }

    /// Parses the JSON object format.
    ///
    /// # Errors
    ///
    /// [`Error::MatrixSyntax`] (with the position serde reports) for
    /// documents that are not of the expected shape, and
    /// [`Error::InvalidMatrix`] for structurally invalid content:
    /// non-integer entries, out-of-triangle indices, duplicates, `r < 1`.
    pub fn parse_json(input: &str) -> Result<Self> {
        let doc: MatrixJson = serde_json::from_str(input).map_err(|err| Error::MatrixSyntax {
            line: err.line().max(1),
            column: Some(err.column().max(1)),
            message: format!("malformed matrix JSON: {}", classify_serde(&err)),
        })?;
        let r = usize::try_from(doc.r)
            .map_err(|_| Error::InvalidMatrix(format!("tower height {} is out of range", doc.r)))?;
        if r < 1 {
            return Err(Error::InvalidMatrix(
                "tower height must be at least 1, got 0".into(),
            ));
        }
        let mut beta = BTreeMap::new();
        for (k, (i, j, number)) in doc.beta.into_iter().enumerate() {
            let value = BigInt::from_str(&number.to_string()).map_err(|_| {
                Error::InvalidMatrix(format!(
                    "beta[{k}] = [{i}, {j}, {number}]: entry is not an integer"
                ))
            })?;
            let (i, j) = (
                usize::try_from(i).unwrap_or(usize::MAX),
                usize::try_from(j).unwrap_or(usize::MAX),
            );
            if !(1 <= i && i < j && j <= r) {
                return Err(Error::InvalidMatrix(format!(
                    "beta entry ({i}, {j}): indices must satisfy 1 <= i < j <= r (r = {r})"
                )));
            }
            if beta.insert((i, j), value).is_some() {
                return Err(Error::InvalidMatrix(format!(
                    "beta entry ({i}, {j}) appears more than once"
                )));
            }
        }
        Self::new(r, beta)
    }

    /// Renders the text format. Zero entries are written explicitly so each
    /// row is self-describing.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.r);
        for i in 1..self.r {
            let row: Vec<String> = (i + 1..=self.r)
                .map(|j| self.beta(i, j).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Renders the JSON format (nonzero entries only, lexicographic order).
    pub fn to_json(&self) -> String {
        let beta = self
            .beta
            .iter()
            .map(|(&(i, j), value)| {
                let number = serde_json::Number::from_str(&value.to_string())
                    .expect("a BigInt always prints as a valid JSON integer");
                (i as u64, j as u64, number)
            })
            .collect();
        let doc = MatrixJson {
            r: self.r as u64,
            beta,
        };
        serde_json::to_string(&doc).expect("matrix JSON serialization cannot fail")
    }
}

impl fmt::Display for BottMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Serde image of the JSON interchange format.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    r: u64,
    beta: Vec<(u64, u64, serde_json::Number)>,
}

/// Splits a line into whitespace-separated tokens, tagging each with its
/// 1-based character column.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut column = 0usize;
    let mut start: Option<(usize, usize)> = None;
    for (byte, ch) in line.char_indices() {
        column += 1;
        if ch.is_whitespace() {
            if let Some((start_column, start_byte)) = start.take() {
                out.push((start_column, &line[start_byte..byte]));
            }
        } else if start.is_none() {
            start = Some((column, byte));
        }
    }
    if let Some((start_column, start_byte)) = start {
        out.push((start_column, &line[start_byte..]));
    }
    out
}

fn entries_word(n: usize) -> &'static str {
    if n == 1 {
        "entry"
    } else {
        "entries"
    }
}

/// Keeps serde's message but strips the trailing position note (we report
/// the position through [`Error::MatrixSyntax`] already).
fn classify_serde(err: &serde_json::Error) -> String {
    let text = err.to_string();
    match text.find(" at line ") {
        Some(pos) => text[..pos].to_string(),
        None => text,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_text_format() {
        let m = BottMatrix::parse_text("3\n1 -2\n0\n").expect("valid matrix");
        assert_eq!(m.r(), 3);
        assert_eq!(*m.beta(1, 2), BigInt::from(1));
        assert_eq!(*m.beta(1, 3), BigInt::from(-2));
        assert_eq!(*m.beta(2, 3), BigInt::from(0));
    }

    #[test]
    fn height_one_tower_needs_no_rows() {
        let m = BottMatrix::parse_text("1\n").expect("valid matrix");
        assert_eq!(m.r(), 1);
        assert_eq!(m.to_text(), "1\n");
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let m = BottMatrix::parse_text("# a Hirzebruch surface\n\n2\n  # twist\n-2\n")
            .expect("valid matrix");
        assert_eq!(*m.beta(1, 2), BigInt::from(-2));
    }

    #[test]
    fn reports_wrong_entry_count_with_the_row_number() {
        let err = BottMatrix::parse_text("2\n1 2\n").expect_err("row 1 is too long");
        assert_eq!(
            err.to_string(),
            "line 2: row 1: expected 1 entry, got 2",
            "the singular/plural form and row index are part of the contract"
        );
    }

    #[test]
    fn reports_bad_tokens_with_line_and_column() {
        let err = BottMatrix::parse_text("3\n4 x\n0\n").expect_err("x is not an integer");
        let Error::MatrixSyntax { line, column, .. } = &err else {
            panic!("expected a syntax error, got {err:?}");
        };
        assert_eq!((*line, *column), (2, Some(3)));
        assert!(err.to_string().contains("invalid integer 'x'"));
    }

    #[test]
    fn rejects_height_zero_and_missing_rows() {
        let err = BottMatrix::parse_text("0\n").expect_err("height 0");
        assert!(err.to_string().contains("at least 1"), "{err}");

        let err = BottMatrix::parse_text("3\n1 1\n").expect_err("row 2 missing");
        assert!(err.to_string().contains("expected row 2"), "{err}");

        let err = BottMatrix::parse_text("2\n1\n9\n").expect_err("extra row");
        assert!(err.to_string().contains("after the final row"), "{err}");
    }

    #[test]
    fn parses_and_roundtrips_json() {
        let m = BottMatrix::parse("{\"r\": 3, \"beta\": [[1, 3, -2], [1, 2, 1]]}")
            .expect("valid JSON matrix");
        assert_eq!(*m.beta(1, 3), BigInt::from(-2));
        let again = BottMatrix::parse(&m.to_json()).expect("round-trip");
        assert_eq!(again, m);
    }

    #[test]
    fn json_keeps_entries_exact_beyond_machine_precision() {
        let huge = BigInt::from(2).pow(100);
        let text = format!("{{\"r\": 2, \"beta\": [[1, 2, {huge}]]}}");
        let m = BottMatrix::parse(&text).expect("valid JSON matrix");
        assert_eq!(*m.beta(1, 2), huge);
        let again = BottMatrix::parse(&m.to_json()).expect("round-trip");
        assert_eq!(again, m);
    }

    #[test]
    fn json_rejects_duplicates_floats_and_bad_indices() {
        let err = BottMatrix::parse_json("{\"r\": 2, \"beta\": [[1, 2, 1], [1, 2, 3]]}")
            .expect_err("duplicate entry");
        assert!(err.to_string().contains("more than once"), "{err}");

        let err = BottMatrix::parse_json("{\"r\": 2, \"beta\": [[1, 2, 1.5]]}")
            .expect_err("fractional entry");
        assert!(err.to_string().contains("not an integer"), "{err}");

        let err = BottMatrix::parse_json("{\"r\": 2, \"beta\": [[2, 1, 1]]}")
            .expect_err("lower-triangle entry");
        assert!(err.to_string().contains("1 <= i < j <= r"), "{err}");

        let err = BottMatrix::parse_json("{\"r\": 2, \"betas\": []}").expect_err("unknown field");
        assert!(matches!(err, Error::MatrixSyntax { .. }), "{err:?}");
    }

    #[test]
    fn text_roundtrip_is_identity() {
        let m = BottMatrix::from_rows_i64(&[&[1, -2], &[3]]).expect("valid rows");
        let again = BottMatrix::parse_text(&m.to_text()).expect("round-trip");
        assert_eq!(again, m);
    }

    #[test]
    fn from_rows_checks_row_lengths() {
        let err = BottMatrix::from_rows_i64(&[&[1, 2, 3], &[4]]).expect_err("row 1 too long");
        assert!(err.to_string().contains("row 1"), "{err}");
    }
}
