//! Recursive-descent parser for polynomial text.
//!
//! Grammar: sums of products of rational constants, variables, powers
//! `^k` and parenthesised subexpressions. Division is allowed only by
//! nonzero constants.

use malachite::Natural;
use std::str::FromStr;

use super::poly::MultiPoly;
use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Natural),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn err(col: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column: col,
        message: message.into(),
    }
}

fn lex(s: &str) -> Result<Vec<Lexed>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Lexed {
                tok: Tok::Num(Natural::from_str(&text).map_err(|_| err(col, "bad number"))?),
                col,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Lexed {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(err(col, format!("unexpected character `{c}`"))),
        };
        out.push(Lexed { tok, col });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    names: &'a [&'a str],
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |l| l.col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|l| l.tok.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let col = self.col();
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(err(col, "division only by nonzero constants"));
                    }
                    let c = d.coeff(&vec![0; self.names.len()]);
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let col = self.col();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e = u32::try_from(&n).map_err(|_| err(col, "exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(err(col, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let n = self.names.len();
        let col = self.col();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(MultiPoly::constant(n, Rat::from_natural(v))),
            Some(Tok::Ident(id)) => match self.names.iter().position(|&s| s == id) {
                Some(i) => Ok(MultiPoly::var(n, i)),
                None => Err(err(col, format!("unknown variable `{id}`"))),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let c = self.col();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(err(c, "expected `)`")),
                }
            }
            Some(_) => Err(err(col, "unexpected token")),
            None => Err(err(col, "unexpected end of input")),
        }
    }
}

pub(crate) fn parse_poly(s: &str, names: &[&str]) -> Result<MultiPoly> {
    let toks = lex(s)?;
    let end_col = s.chars().count() + 1;
    let mut p = Parser {
        toks,
        pos: 0,
        names,
        end_col,
    };
    if p.peek().is_none() {
        return Err(err(end_col, "empty polynomial"));
    }
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(err(p.col(), "trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_style_terms() {
        let p = parse_poly("3/4 * X1^2 * X2 - X2 + 1/2", &["X1", "X2"]).unwrap();
        assert_eq!(p.coeff(&[2, 1]), Rat::new(3, 4));
        assert_eq!(p.coeff(&[0, 1]), Rat::from_i64(-1));
        assert_eq!(p.coeff(&[0, 0]), Rat::new(1, 2));
    }

    #[test]
    fn parentheses_and_powers() {
        let p = parse_poly("(x + y)^2 - 2*x*y", &["x", "y"]).unwrap();
        assert_eq!(p, parse_poly("x^2 + y^2", &["x", "y"]).unwrap());
    }

    #[test]
    fn errors_are_located() {
        match parse_poly("x + * y", &["x", "y"]) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
        match parse_poly("x + z", &["x", "y"]) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly("x / y", &["x", "y"]).is_err());
        assert!(parse_poly("", &["x"]).is_err());
        assert!(parse_poly("(x", &["x"]).is_err());
    }
}
