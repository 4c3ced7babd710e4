//! Line-oriented tokenizing shared by the `stgp-*` text formats.

use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

/// Error raised while reading a text file, tagged with a 1-based line number
/// (0 when the file ended early).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Significant lines of a file: comments after `#` removed, blank lines skipped.
pub(crate) struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, Vec<&'a str>)> + 'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let iter: Box<dyn Iterator<Item = (usize, Vec<&'a str>)> + 'a> =
            Box::new(text.lines().enumerate().filter_map(|(k, raw)| {
                let content = raw.split('#').next().unwrap_or("");
                let tokens: Vec<&str> = content.split_whitespace().collect();
                (!tokens.is_empty()).then_some((k + 1, tokens))
            }));
        Lines {
            inner: iter.peekable(),
            last_line: 0,
        }
    }

    pub(crate) fn next_line(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        match self.inner.next() {
            Some((line, tokens)) => {
                self.last_line = line;
                Ok((line, tokens))
            }
            None => Err(ParseError::new(
                self.last_line,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    /// Reads a `<keyword> <count>` header line.
    pub(crate) fn counted_header(&mut self, keyword: &str) -> Result<(usize, usize), ParseError> {
        let (line, tokens) = self.next_line(&format!("`{keyword} <count>`"))?;
        if tokens.len() != 2 || tokens[0] != keyword {
            return Err(ParseError::new(
                line,
                format!("expected `{keyword} <count>`, found `{}`", tokens.join(" ")),
            ));
        }
        Ok((line, parse_token(line, tokens[1], "count")?))
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.inner.next() {
            None => Ok(()),
            Some((line, tokens)) => Err(ParseError::new(
                line,
                format!("unexpected trailing content `{}`", tokens.join(" ")),
            )),
        }
    }
}

pub(crate) fn parse_token<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("invalid {what} `{token}`")))
}

pub(crate) fn parse_real(line: usize, token: &str, what: &str) -> Result<f64, ParseError> {
    let value: f64 = parse_token(line, token, what)?;
    if !value.is_finite() {
        return Err(ParseError::new(line, format!("non-finite {what} `{token}`")));
    }
    Ok(value)
}

/// Shortest decimal representation that parses back to the same `f64`.
pub(crate) fn write_real(out: &mut String, x: f64) {
    let magnitude = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&magnitude) {
        let _ = write!(out, "{x}");
    } else {
        let _ = write!(out, "{x:e}");
    }
}

pub(crate) fn real(x: f64) -> String {
    let mut s = String::new();
    write_real(&mut s, x);
    s
}
