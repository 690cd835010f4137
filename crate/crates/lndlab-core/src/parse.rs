//! Text syntax for polynomials: `^` for powers, `*` optional between a
//! number and a variable or parenthesized group, rational literals `p/q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational};
use crate::ring::RingContext;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Other(format!("parse error at column {}: {msg}", self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let c = self.src[self.pos] as char;
        let tok = match c {
            '+' => {
                self.pos += 1;
                Token::Plus
            }
            '-' => {
                self.pos += 1;
                Token::Minus
            }
            '*' => {
                self.pos += 1;
                Token::Star
            }
            '^' => {
                self.pos += 1;
                Token::Caret
            }
            '(' => {
                self.pos += 1;
                Token::LParen
            }
            ')' => {
                self.pos += 1;
                Token::RParen
            }
            '0'..='9' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_digit() {
                    self.pos += 1;
                }
                let numer: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.error("bad integer"))?;
                // a slash directly after an integer literal denotes a rational
                let mut denom = BigInt::one();
                if self.pos < self.src.len() && self.src[self.pos] == b'/' {
                    self.pos += 1;
                    let dstart = self.pos;
                    while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_digit() {
                        self.pos += 1;
                    }
                    if dstart == self.pos {
                        return Err(self.error("expected denominator digits after `/`"));
                    }
                    denom = std::str::from_utf8(&self.src[dstart..self.pos])
                        .unwrap()
                        .parse()
                        .map_err(|_| self.error("bad denominator"))?;
                }
                Token::Number(BigRational::new(numer, denom))
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let ch = self.src[self.pos] as char;
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Token::Ident(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
            }
            other => return Err(self.error(&format!("unexpected character `{other}`"))),
        };
        Ok(Some(tok))
    }
}

struct Parser<'a> {
    ring: &'a RingContext,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: &str) -> Error {
        Error::Other(format!("parse error at token {}: {msg}", self.pos + 1))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        while matches!(self.peek(), Some(Token::Plus) | Some(Token::Minus)) {
            if let Some(Token::Minus) = self.bump() {
                negate = !negate;
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                // juxtaposition: `2x`, `3(x+y)`, `x y`
                Some(Token::Ident(_)) | Some(Token::LParen) | Some(Token::Number(_)) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            match self.bump() {
                Some(Token::Number(n)) if n.is_integer() && !num_traits::Signed::is_negative(&n) => {
                    let e: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.error("exponent too large"))?;
                    return base.pow(e);
                }
                _ => return Err(self.error("expected a nonnegative integer exponent after `^`")),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial> {
        match self.bump() {
            Some(Token::Number(n)) => Ok(Polynomial::constant(self.ring, n)),
            Some(Token::Ident(name)) => Polynomial::var(self.ring, &name),
            Some(Token::Minus) => Ok(self.factor()?.neg()),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(self.error("expected `)`")),
                }
            }
            other => Err(self.error(&format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse a polynomial in the given ring.
pub fn parse_polynomial(ring: &RingContext, src: &str) -> Result<Polynomial> {
    let mut lexer = Lexer::new(src);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next_token()? {
        tokens.push(t);
    }
    if tokens.is_empty() {
        return Err(Error::Other("empty polynomial".into()));
    }
    let mut parser = Parser { ring, tokens, pos: 0 };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(p)
}
