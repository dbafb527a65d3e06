//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar: identifiers `[A-Za-z_][A-Za-z0-9_]*`, nonnegative decimal
//! integers, binary `+ - *`, unary minus, parentheses and `^` with an
//! integer exponent (right associative, so `x^2^3 = x^8`). Whitespace is
//! ignored.

use crate::arith::field::FieldCtx;
use crate::arith::multipoly::{MultiPoly, VarCtx};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(text[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: &'a VarCtx,
    field: FieldCtx,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let n = self.int_exponent()?;
            return base.pow(n);
        }
        Ok(base)
    }

    fn int_exponent(&mut self) -> Result<u64> {
        let pos = self.pos();
        let digits = match self.bump() {
            Tok::Num(d) => d,
            _ => {
                return Err(Error::Syntax {
                    pos,
                    msg: "expected an integer exponent".into(),
                })
            }
        };
        let base: u64 = digits.parse().map_err(|_| Error::ExponentOverflow)?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.int_exponent()?;
            let e = u32::try_from(e).map_err(|_| Error::ExponentOverflow)?;
            return base.checked_pow(e).ok_or(Error::ExponentOverflow);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<MultiPoly> {
        match self.bump() {
            Tok::Num(d) => {
                let p = self.field.p();
                let v = d
                    .bytes()
                    .fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
                Ok(MultiPoly::constant(self.field, self.vars, v))
            }
            Tok::Ident(name) => match self.vars.index_of(&name) {
                Some(i) => Ok(MultiPoly::var(self.field, self.vars, i)),
                None => Err(Error::UnknownVariable(name)),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.syntax("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => self.syntax("unexpected end of input"),
            other => {
                self.at -= 1;
                self.syntax(format!("unexpected token {other:?}"))
            }
        }
    }
}

/// Parses `text` into a canonical polynomial over `field` in `vars`.
pub fn parse_poly(text: &str, vars: &VarCtx, field: FieldCtx) -> Result<MultiPoly> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        at: 0,
        vars,
        field,
    };
    let out = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.syntax("trailing input");
    }
    Ok(out)
}
