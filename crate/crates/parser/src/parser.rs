use tlvc_logic::Predicate;

use crate::lexer::{Token, TokenKind};
use crate::ParseError;

const PRIMARY: [TokenKind; 8] = [
    TokenKind::Ident,
    TokenKind::True,
    TokenKind::False,
    TokenKind::Not,
    TokenKind::Next,
    TokenKind::Finally,
    TokenKind::Globally,
    TokenKind::LParen,
];

/// Precedence, tightest first: unary `! X F G`, then right-associative `U`,
/// then `&`, then `|`.
pub fn parse(tokens: &[Token]) -> Result<Predicate, ParseError> {
    let mut p = Parser { tokens, pos: 0 };
    let out = p.or()?;
    p.expect(TokenKind::Eof, &[TokenKind::And, TokenKind::Or, TokenKind::Until, TokenKind::Eof])?;
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos.min(self.tokens.len() - 1)];
        self.pos += 1;
        t
    }

    fn expect(&mut self, kind: TokenKind, expected: &[TokenKind]) -> Result<(), ParseError> {
        if self.peek().kind == kind {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn unexpected(&self, expected: &[TokenKind]) -> ParseError {
        let t = self.peek();
        let found = if t.kind == TokenKind::Eof { "end of input".to_string() } else { format!("`{}`", t.lexeme) };
        let list: Vec<String> = expected.iter().map(ToString::to_string).collect();
        ParseError {
            message: format!("unexpected {found}, expected one of {}", list.join(", ")),
            span: t.span,
            expected: expected.to_vec(),
        }
    }

    fn or(&mut self) -> Result<Predicate, ParseError> {
        let mut items = vec![self.and()?];
        while self.peek().kind == TokenKind::Or {
            self.bump();
            items.push(self.and()?);
        }
        Ok(Predicate::or(items))
    }

    fn and(&mut self) -> Result<Predicate, ParseError> {
        let mut items = vec![self.until()?];
        while self.peek().kind == TokenKind::And {
            self.bump();
            items.push(self.until()?);
        }
        Ok(Predicate::and(items))
    }

    fn until(&mut self) -> Result<Predicate, ParseError> {
        let lhs = self.unary()?;
        if self.peek().kind == TokenKind::Until {
            self.bump();
            let rhs = self.until()?;
            return Ok(Predicate::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Predicate, ParseError> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Not => {
                self.bump();
                Ok(Predicate::not(self.unary()?))
            }
            TokenKind::Next => {
                self.bump();
                Ok(Predicate::next(self.unary()?))
            }
            TokenKind::Finally => {
                self.bump();
                Ok(Predicate::finally(self.unary()?))
            }
            TokenKind::Globally => {
                self.bump();
                Ok(Predicate::globally(self.unary()?))
            }
            TokenKind::Ident => {
                self.bump();
                Ok(Predicate::Atom(t.lexeme))
            }
            TokenKind::True => {
                self.bump();
                Ok(Predicate::True)
            }
            TokenKind::False => {
                self.bump();
                Ok(Predicate::False)
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.or()?;
                self.expect(TokenKind::RParen, &[TokenKind::RParen, TokenKind::And, TokenKind::Or, TokenKind::Until])?;
                Ok(inner)
            }
            _ => Err(self.unexpected(&PRIMARY)),
        }
    }
}
