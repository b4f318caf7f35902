//! Text syntax for temporal-logic predicates.
//!
//! ```text
//! spec    := or
//! or      := and ( ("|" | "or") and )*
//! and     := until ( ("&" | "and") until )*
//! until   := unary ( "U" until )?
//! unary   := ("!" | "not" | "X" | "F" | "G") unary | primary
//! primary := IDENT | "true" | "false" | "(" or ")"
//! IDENT   := [a-zA-Z_][a-zA-Z0-9_]*   (keywords excluded)
//! ```

use std::fmt;

use thiserror::Error;
use tlvc_logic::Predicate;

mod lexer;
mod parser;

pub use lexer::{lex, Token, TokenKind};
pub use parser::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub offset: usize,
    pub len: usize,
}

impl Span {
    pub fn new(offset: usize, len: usize) -> Self {
        Span { offset, len }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at byte {}", span.offset)]
pub struct ParseError {
    pub message: String,
    pub span: Span,
    pub expected: Vec<TokenKind>,
}

impl ParseError {
    /// Multi-line message with the offending line and a caret marker.
    pub fn render(&self, input: &str) -> String {
        let start = input[..self.span.offset].rfind('\n').map_or(0, |i| i + 1);
        let end = input[self.span.offset..].find('\n').map_or(input.len(), |i| self.span.offset + i);
        let line_no = input[..start].matches('\n').count() + 1;
        let col = input[start..self.span.offset].chars().count();
        let width = self.span.len.max(1);
        format!(
            "error: {}\n --> line {line_no}, column {}\n  | {}\n  | {}{}",
            self.message,
            col + 1,
            &input[start..end],
            " ".repeat(col),
            "^".repeat(width)
        )
    }
}

pub fn parse_str(input: &str) -> Result<Predicate, ParseError> {
    parse(&lex(input)?)
}

/// Parses a spec file: `#` starts a comment running to end of line.
/// Comments are blanked rather than removed so spans still index the file.
pub fn parse_spec_file(text: &str) -> Result<Predicate, ParseError> {
    let mut cleaned = String::with_capacity(text.len());
    for line in text.split_inclusive('\n') {
        match line.find('#') {
            Some(i) => {
                let body = line.trim_end_matches('\n');
                cleaned.push_str(&line[..i]);
                cleaned.push_str(&" ".repeat(body.len() - i));
                cleaned.push_str(&line[body.len()..]);
            }
            None => cleaned.push_str(line),
        }
    }
    parse_str(&cleaned)
}

/// Canonical fully parenthesized text.
pub fn print(p: &Predicate) -> String {
    p.to_string()
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.offset, self.offset + self.len)
    }
}
