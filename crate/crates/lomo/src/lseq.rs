//! LSEQ: a line-oriented text format for labeled frame sequences.
//!
//! ```text
//! lseq 1 <d>
//! seq <id> <label> <group or -> <N>
//! <d numbers>      (N rows)
//! ```
//!
//! Blank lines are ignored and lines starting with `#` are comments. Values
//! are written in the shortest form that parses back to the same `f64`.

use std::fmt::Write as _;
use std::path::Path;

use lomo_core::SequenceSample;

use crate::error::{Error, Result};

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_path_buf(), line, message: message.into() }
}

pub fn read_lseq(path: impl AsRef<Path>) -> Result<Vec<SequenceSample>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_lseq(&text, path)
}

/// Parses LSEQ text; `path` is only used in error messages.
pub fn parse_lseq(text: &str, path: &Path) -> Result<Vec<SequenceSample>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or_else(|| parse_err(path, 1, "missing `lseq` header"))?;
    let dim = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["lseq", "1", d] => d
            .parse::<usize>()
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| parse_err(path, header_line, format!("bad dimension `{d}`")))?,
        ["lseq", v, _] => return Err(parse_err(path, header_line, format!("unsupported version `{v}`"))),
        _ => return Err(parse_err(path, header_line, "expected `lseq 1 <d>`")),
    };

    let mut samples = Vec::new();
    while let Some((seq_line, line)) = lines.next() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [tag, id, label, group, n] = fields[..] else {
            return Err(parse_err(path, seq_line, "expected `seq <id> <label> <group> <N>`"));
        };
        if tag != "seq" {
            return Err(parse_err(path, seq_line, format!("expected `seq`, found `{tag}`")));
        }
        let label: i64 = label.parse().map_err(|_| parse_err(path, seq_line, format!("bad label `{label}`")))?;
        let n: usize = n.parse().map_err(|_| parse_err(path, seq_line, format!("bad frame count `{n}`")))?;
        if n == 0 {
            return Err(parse_err(path, seq_line, format!("sequence `{id}` has no frames")));
        }
        let group = (group != "-").then(|| group.to_string());

        let mut data = Vec::with_capacity(n * dim);
        for frame in 0..n {
            let (row_line, row) = lines.next().ok_or_else(|| {
                parse_err(path, seq_line, format!("sequence `{id}` ends after {frame} of {n} frames"))
            })?;
            let before = data.len();
            for token in row.split_whitespace() {
                let v: f64 = token.parse().map_err(|_| parse_err(path, row_line, format!("bad number `{token}`")))?;
                if !v.is_finite() {
                    return Err(parse_err(path, row_line, format!("non-finite value `{token}`")));
                }
                data.push(v);
            }
            let found = data.len() - before;
            if found != dim {
                return Err(parse_err(path, row_line, format!("expected {dim} values, found {found}")));
            }
        }
        let sample = SequenceSample::new(id, label, group, dim, data).map_err(|e| parse_err(path, seq_line, e.to_string()))?;
        samples.push(sample);
    }
    Ok(samples)
}

fn check_token(kind: &str, value: &str) -> Result<()> {
    if value.is_empty() || value.chars().any(char::is_whitespace) || value.starts_with('#') {
        return Err(Error::Usage(format!("{kind} `{value}` must be a non-empty token without whitespace")));
    }
    Ok(())
}

/// Renders samples as LSEQ. All samples must share one dimension; ids and
/// groups must be single tokens and a group may not be `-`.
pub fn format_lseq(samples: &[SequenceSample]) -> Result<String> {
    let dim = samples.first().map_or(1, SequenceSample::dim);
    let mut out = format!("lseq 1 {dim}\n");
    for s in samples {
        if s.dim() != dim {
            return Err(lomo_core::Error::DimensionMismatch { expected: dim, found: s.dim() }.into());
        }
        check_token("id", s.id())?;
        let group = match s.group() {
            Some("-") => return Err(Error::Usage(format!("group of `{}` may not be `-`", s.id()))),
            Some(g) => {
                check_token("group", g)?;
                g
            }
            None => "-",
        };
        writeln!(out, "seq {} {} {} {}", s.id(), s.label(), group, s.len()).expect("writing to a String");
        for frame in s.frames() {
            let mut first = true;
            for v in frame {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{v:?}").expect("writing to a String");
            }
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn write_lseq(path: impl AsRef<Path>, samples: &[SequenceSample]) -> Result<()> {
    let path = path.as_ref();
    let text = format_lseq(samples)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
