use std::fmt;

use crate::{ParseError, Span};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenKind {
    Ident,
    True,
    False,
    Not,
    And,
    Or,
    Next,
    Finally,
    Globally,
    Until,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident => "identifier",
            TokenKind::True => "`true`",
            TokenKind::False => "`false`",
            TokenKind::Not => "`!`",
            TokenKind::And => "`&`",
            TokenKind::Or => "`|`",
            TokenKind::Next => "`X`",
            TokenKind::Finally => "`F`",
            TokenKind::Globally => "`G`",
            TokenKind::Until => "`U`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "not" => TokenKind::Not,
        "and" => TokenKind::And,
        "or" => TokenKind::Or,
        "X" => TokenKind::Next,
        "F" => TokenKind::Finally,
        "G" => TokenKind::Globally,
        "U" => TokenKind::Until,
        "true" => TokenKind::True,
        "false" => TokenKind::False,
        _ => return None,
    })
}

pub fn lex(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(start, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match ch {
            '!' => Some(TokenKind::Not),
            '&' => Some(TokenKind::And),
            '|' => Some(TokenKind::Or),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = single {
            chars.next();
            out.push(Token { kind, lexeme: ch.to_string(), span: Span::new(start, 1) });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    end = i + 1;
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &input[start..end];
            let kind = keyword(word).unwrap_or(TokenKind::Ident);
            out.push(Token { kind, lexeme: word.to_string(), span: Span::new(start, end - start) });
            continue;
        }
        return Err(ParseError {
            message: format!("unexpected character `{ch}`"),
            span: Span::new(start, ch.len_utf8()),
            expected: vec![],
        });
    }
    out.push(Token { kind: TokenKind::Eof, lexeme: String::new(), span: Span::new(input.len(), 0) });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    fn kinds(s: &str) -> Vec<TokenKind> {
        lex(s).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn basic_streams() {
        assert_eq!(kinds("G(!c)"), vec![Globally, LParen, Not, Ident, RParen, Eof]);
        assert_eq!(kinds("a U b"), vec![Ident, Until, Ident, Eof]);
        assert_eq!(kinds("not a and b or true"), vec![Not, Ident, And, Ident, Or, True, Eof]);
        assert_eq!(kinds("Fx Gr0 X_1"), vec![Ident, Ident, Ident, Eof]);
    }

    #[test]
    fn hash_is_rejected() {
        let err = lex("a # b").unwrap_err();
        assert_eq!(err.span, Span::new(2, 1));
    }

    #[test]
    fn lexemes_round_trip() {
        let src = "G (r0&F r1)|  false";
        for t in lex(src).unwrap() {
            assert_eq!(&src[t.span.offset..t.span.offset + t.span.len], t.lexeme);
        }
    }
}
