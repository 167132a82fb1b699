//! Text syntax for polynomials.
//!
//! Integer literals, variables, `+ - * / ^` and parentheses. Exponents are
//! nonnegative integer literals, division is only allowed by nonzero
//! constants, and juxtaposition (`2x`) is rejected.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::context::{VarContext, Variable};
use super::polynomial::Polynomial;
use super::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelToken {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Rel(RelToken),
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Words reserved for formulas; never variable names.
pub(crate) const KEYWORDS: [&str; 5] = ["and", "or", "not", "true", "false"];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

pub(crate) fn tokenize(text: &str, line: usize, column_offset: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = column_offset + i + 1;
        let err = |message: String| Error::Parse {
            line,
            column,
            message,
        };
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Num(digits.parse().expect("digits")),
                line,
                column,
            });
            continue;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line,
                column,
            });
            continue;
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, width) = match (c, next) {
                ('<', Some('=')) => (Tok::Rel(RelToken::Le), 2),
                ('>', Some('=')) => (Tok::Rel(RelToken::Ge), 2),
                ('!', Some('=')) => (Tok::Rel(RelToken::Ne), 2),
                ('=', Some('=')) => (Tok::Rel(RelToken::Eq), 2),
                ('<', Some('>')) => (Tok::Rel(RelToken::Ne), 2),
                ('<', _) => (Tok::Rel(RelToken::Lt), 1),
                ('>', _) => (Tok::Rel(RelToken::Gt), 1),
                ('=', _) => (Tok::Rel(RelToken::Eq), 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                ('^', _) => (Tok::Caret, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                _ => return Err(err(format!("unexpected character `{c}`"))),
            };
            i += width;
            tok
        };
        out.push(Token { tok, line, column });
    }
    Ok(out)
}

/// Recursive-descent parser over a token slice.
pub(crate) struct Parser<'a> {
    pub ctx: &'a Arc<VarContext>,
    pub toks: &'a [Token],
    pub pos: usize,
    pub line: usize,
    pub end_column: usize,
}

impl<'a> Parser<'a> {
    pub fn new(ctx: &'a Arc<VarContext>, toks: &'a [Token], line: usize, end_column: usize) -> Self {
        Parser {
            ctx,
            toks,
            pos: 0,
            line,
            end_column,
        }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = match self.toks.get(self.pos) {
            Some(t) => (t.line, t.column),
            None => (self.line, self.end_column),
        };
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    pub fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    pub fn polynomial(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let divisor = self.power()?;
                    match divisor.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => return Err(self.error("division by zero")),
                        None => return Err(self.error("division is only allowed by constants")),
                    }
                }
                Some(Tok::Ident(w)) if is_keyword(w) => return Ok(acc),
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return Err(self.error("implicit multiplication is not allowed; use `*`"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| self.error("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => {
                    self.pos -= 1;
                    Err(self.error("exponent must be a nonnegative integer literal"))
                }
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ctx, Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) if is_keyword(&name) => Err(self.error(format!("unexpected keyword `{name}`"))),
            Some(Tok::Ident(name)) => match self.ctx.variable(&name) {
                Ok(v) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.ctx, v))
                }
                Err(_) => Err(self.error(format!("unknown variable `{name}`"))),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.polynomial()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}

impl Polynomial {
    /// Parses a polynomial over `ctx`.
    pub fn parse(ctx: &Arc<VarContext>, text: &str) -> Result<Polynomial> {
        Self::parse_at(ctx, text, 1, 0)
    }

    pub(crate) fn parse_at(
        ctx: &Arc<VarContext>,
        text: &str,
        line: usize,
        column_offset: usize,
    ) -> Result<Polynomial> {
        let toks = tokenize(text, line, column_offset)?;
        let mut parser = Parser::new(ctx, &toks, line, column_offset + text.chars().count() + 1);
        if parser.at_end() {
            return Err(parser.error("empty polynomial"));
        }
        let p = parser.polynomial()?;
        if !parser.at_end() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(p)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ctx = self.context().clone();
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (j, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(ctx.name(Variable(j)).to_string()),
                    _ => factors.push(format!("{}^{}", ctx.name(Variable(j)), e)),
                }
            }
            if factors.is_empty() {
                write_rational(f, &a)?;
            } else {
                if !a.is_one() {
                    write_rational(f, &a)?;
                    write!(f, "*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let ctx = VarContext::new(&["x", "y", "z"]).unwrap();
        let p = Polynomial::parse(&ctx, "(x+1)^2 + (y + 2/3)^2 - 3").unwrap();
        assert_eq!(p.to_string(), "x^2 + 2*x + y^2 + 4/3*y - 14/9");
        let q = Polynomial::parse(&ctx, "-x^2 - -1").unwrap();
        assert_eq!(q.to_string(), "-x^2 + 1");
        assert_eq!(Polynomial::parse(&ctx, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn rejects_bad_input() {
        let ctx = VarContext::new(&["x", "y"]).unwrap();
        for bad in ["2x", "x^-1", "x^y", "x/y", "w + 1", "(x+1", "x +", ""] {
            assert!(Polynomial::parse(&ctx, bad).is_err(), "{bad}");
        }
        match Polynomial::parse(&ctx, "x + $") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
    }
}
