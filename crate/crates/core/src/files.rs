//! Text formats for frames and vector-map matrices.
//!
//! Frame file:
//!
//! ```text
//! # Minkowski space
//! dimension 4
//! metric signature 3 1 0
//! ```
//!
//! `metric` is one of `euclidean`, `diagonal d0 d1 …`, `signature p q r`, or
//! `matrix` followed by `n` rows. An optional `cbm` line followed by `n`
//! rows derives the frame `f_i = Σ_j C_ij e_j` from the metric above it.
//!
//! Matrix file: a `rows m cols n` header, then `m` rows of `n` reals.

use std::sync::Arc;

use crate::blades::MAX_DIMENSION;
use crate::error::{Error, Result};
use crate::frames::{compile_frame, Frame, FrameSpec, Metric};
use crate::linalg::Matrix;

type Words<'a> = Box<dyn Iterator<Item = (usize, Vec<&'a str>)> + 'a>;

struct Lines<'a> {
    inner: std::iter::Peekable<Words<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Words<'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
                .filter(|(_, w)| !w.is_empty()),
        );
        Lines { inner: it.peekable(), last: 0 }
    }

    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        let item = self.inner.next();
        if let Some((n, _)) = &item {
            self.last = *n;
        }
        item
    }

    fn peek_keyword(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|(_, w)| w[0])
    }

    fn rows(&mut self, count: usize, width: usize, what: &str) -> Result<Matrix> {
        let mut rows = Vec::with_capacity(count);
        for r in 0..count {
            let Some((line, words)) = self.next() else {
                return Err(syntax(self.last + 1, format!("expected {count} rows for {what}, found {r}")));
            };
            if words.len() != width {
                return Err(syntax(line, format!("{what} row must have {width} entries, found {}", words.len())));
            }
            rows.push(words.iter().map(|w| real(line, w)).collect::<Result<Vec<_>>>()?);
        }
        Matrix::from_rows(&rows)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn real(line: usize, word: &str) -> Result<f64> {
    match word.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(syntax(line, format!("expected a real number, found `{word}`"))),
    }
}

fn count(line: usize, word: &str) -> Result<usize> {
    word.parse().map_err(|_| syntax(line, format!("expected a non-negative integer, found `{word}`")))
}

fn arity(line: usize, words: &[&str], want: usize) -> Result<()> {
    if words.len() != want {
        return Err(syntax(line, format!("`{}` takes {} value(s), found {}", words[0], want - 1, words.len() - 1)));
    }
    Ok(())
}

/// Parses a frame file into an uncompiled specification.
pub fn parse_frame_file(text: &str) -> Result<FrameSpec> {
    let mut lines = Lines::new(text);
    let Some((line, words)) = lines.next() else {
        return Err(syntax(1, "empty frame file: expected `dimension`"));
    };
    if words[0] != "dimension" {
        return Err(keyword_error(line, words[0], "dimension"));
    }
    arity(line, &words, 2)?;
    let n = count(line, words[1])?;
    if n == 0 || n > MAX_DIMENSION {
        return Err(syntax(line, format!("dimension must be between 1 and {MAX_DIMENSION}")));
    }

    let Some((line, words)) = lines.next() else {
        return Err(syntax(lines.last + 1, "expected `metric`"));
    };
    if words[0] != "metric" {
        return Err(keyword_error(line, words[0], "metric"));
    }
    let Some(&kind) = words.get(1) else {
        return Err(syntax(line, "expected euclidean | diagonal | signature | matrix after `metric`"));
    };
    let args = &words[1..];
    let metric = match kind {
        "euclidean" => {
            arity(line, args, 1)?;
            Metric::Euclidean
        }
        "diagonal" => {
            arity(line, args, n + 1)?;
            Metric::Diagonal(args[1..].iter().map(|w| real(line, w)).collect::<Result<_>>()?)
        }
        "signature" => {
            arity(line, args, 4)?;
            let (p, q, r) = (count(line, args[1])?, count(line, args[2])?, count(line, args[3])?);
            if p + q + r != n {
                return Err(syntax(line, format!("signature {p} {q} {r} does not add up to dimension {n}")));
            }
            Metric::Signature { p, q, r }
        }
        "matrix" => {
            arity(line, args, 1)?;
            Metric::Matrix(lines.rows(n, n, "metric matrix")?)
        }
        other => {
            return Err(syntax(
                line,
                format!("unknown metric `{other}`: expected euclidean | diagonal | signature | matrix"),
            ))
        }
    };
    let mut spec = FrameSpec { n, metric };

    if let Some(kw) = lines.peek_keyword() {
        let (line, words) = lines.next().expect("peeked");
        if kw != "cbm" {
            return Err(keyword_error(line, kw, "cbm"));
        }
        arity(line, &words, 1)?;
        let cbm = lines.rows(n, n, "change-of-basis matrix")?;
        spec = FrameSpec::derived(spec, cbm);
    }
    if let Some((line, words)) = lines.next() {
        return Err(syntax(line, format!("unexpected `{}` after the frame definition", words[0])));
    }
    Ok(spec)
}

fn keyword_error(line: usize, found: &str, expected: &str) -> Error {
    syntax(line, format!("unknown keyword `{found}`: expected `{expected}`"))
}

/// Parses and compiles a frame file.
pub fn load_frame(text: &str) -> Result<Arc<Frame>> {
    compile_frame(&parse_frame_file(text)?)
}

/// Parses a `rows m cols n` matrix file.
pub fn parse_matrix_file(text: &str) -> Result<Matrix> {
    let mut lines = Lines::new(text);
    let Some((line, words)) = lines.next() else {
        return Err(syntax(1, "empty matrix file: expected `rows m cols n`"));
    };
    if words.len() != 4 || words[0] != "rows" || words[2] != "cols" {
        return Err(syntax(line, "expected header `rows m cols n`"));
    }
    let (m, n) = (count(line, words[1])?, count(line, words[3])?);
    if m == 0 || n == 0 || m > MAX_DIMENSION || n > MAX_DIMENSION {
        return Err(syntax(line, format!("matrix sizes must be between 1 and {MAX_DIMENSION}")));
    }
    let mat = lines.rows(m, n, "matrix")?;
    if let Some((line, words)) = lines.next() {
        return Err(syntax(line, format!("unexpected `{}` after {m} matrix rows", words[0])));
    }
    Ok(mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::FrameKind;

    fn line_of(err: Error) -> usize {
        match err {
            Error::Syntax { line, .. } => line,
            other => panic!("not a syntax error: {other}"),
        }
    }

    #[test]
    fn metric_variants() {
        let f = load_frame("dimension 5\nmetric signature 4 1 0\n").unwrap();
        assert_eq!(f.kind(), FrameKind::Orthonormal);
        let f = load_frame("# comment\n\ndimension 3  # trailing\nmetric euclidean\n").unwrap();
        assert_eq!(f.kind(), FrameKind::Euclidean);
        let f = load_frame("dimension 2\nmetric diagonal 2 -0.5e0\n").unwrap();
        assert_eq!(f.diag().unwrap(), &[2.0, -0.5]);
        let f = load_frame("dimension 2\nmetric matrix\n0 1\n1 0\n").unwrap();
        assert_eq!(f.kind(), FrameKind::NonOrthogonal);
    }

    #[test]
    fn derived_frames() {
        let spec = parse_frame_file("dimension 2\nmetric euclidean\ncbm\n1 1\n0 1\n").unwrap();
        assert!(matches!(spec.metric, Metric::Derived { .. }));
        let f = compile_frame(&spec).unwrap();
        assert_eq!(f.ipm()[(0, 1)], 1.0);
        assert_eq!(f.ipm()[(0, 0)], 2.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of(parse_frame_file("dimension 2\nmetrik euclidean\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_frame_file("dimension 2\nmetric diagonal 1\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_frame_file("dimension 2\nmetric signature 1 0 0\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_frame_file("dimension 2\nmetric matrix\n1 0\n").unwrap_err()), 4);
        assert_eq!(line_of(parse_frame_file("dimension 2\nmetric matrix\n1 0\n0 x\n").unwrap_err()), 4);
        assert_eq!(line_of(parse_frame_file("dimension 2\nmetric euclidean\nfoo\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_frame_file("\n\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_frame_file("dimension 0\nmetric euclidean").unwrap_err()), 1);
        assert_eq!(line_of(parse_frame_file("dimension 1\nmetric diagonal nan").unwrap_err()), 2);
    }

    #[test]
    fn matrices() {
        let m = parse_matrix_file("rows 2 cols 3\n1 2 3\n4 5 6\n").unwrap();
        assert_eq!(m.row(1), &[4.0, 5.0, 6.0]);
        assert_eq!(line_of(parse_matrix_file("rows 2 cols 3\n1 2 3\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_matrix_file("rows 1 cols 1\n1\n2\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_matrix_file("cols 1 rows 1\n1\n").unwrap_err()), 1);
    }
}
