//! Recursive-descent parser for the scalar expression language.
//!
//! Precedence, loosest first: `+ -`, then `* /`, then unary minus, then `^`
//! (right associative). `**` is accepted as a synonym for `^`.

use std::collections::BTreeMap;

use super::{Func, Node};
use crate::error::{Error, Result};

/// Identifiers that are always treated as variable names, so that using the
/// wrong one reports `WrongVariable` instead of `UnknownIdentifier`.
const VARIABLE_NAMES: &[&str] = &["t", "z", "x", "s"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn syntax(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<(usize, Tok)> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' if self.src.get(self.pos + 1) == Some(&b'*') => {
                self.pos += 1;
                Tok::Caret
            }
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => return self.number(start),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos])
                    .expect("ascii identifier")
                    .to_string();
                return Ok((start, Tok::Ident(name)));
            }
            _ => return Err(self.syntax(start, format!("unexpected character {:?}", c as char))),
        };
        self.pos += 1;
        Ok((start, tok))
    }

    fn number(&mut self, start: usize) -> Result<(usize, Tok)> {
        let digits = |lx: &mut Self| {
            let s = lx.pos;
            while lx.src.get(lx.pos).is_some_and(u8::is_ascii_digit) {
                lx.pos += 1;
            }
            lx.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(self.syntax(start, "malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // `2e` is not an exponent; leave `e` for the identifier lexer
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii number");
        let value: f64 = text
            .parse()
            .map_err(|_| self.syntax(start, format!("malformed number `{text}`")))?;
        if !value.is_finite() {
            return Err(self.syntax(start, format!("number `{text}` is out of range")));
        }
        Ok((start, Tok::Num(value)))
    }
}

pub(super) struct Parser<'a> {
    lexer: Lexer<'a>,
    current: (usize, Tok),
    variable: &'a str,
    params: &'a BTreeMap<String, f64>,
}

impl<'a> Parser<'a> {
    pub(super) fn new(
        source: &'a str,
        variable: &'a str,
        params: &'a BTreeMap<String, f64>,
    ) -> Result<Self> {
        let mut lexer = Lexer {
            src: source.as_bytes(),
            pos: 0,
        };
        let current = lexer.next()?;
        Ok(Self {
            lexer,
            current,
            variable,
            params,
        })
    }

    pub(super) fn parse_all(mut self) -> Result<Node> {
        let node = self.expr()?;
        match &self.current {
            (_, Tok::End) => Ok(node),
            (offset, tok) => Err(Error::Syntax {
                offset: *offset,
                message: format!("unexpected token {tok:?} after expression"),
            }),
        }
    }

    fn bump(&mut self) -> Result<(usize, Tok)> {
        let next = self.lexer.next()?;
        Ok(std::mem::replace(&mut self.current, next))
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.current.1 == tok {
            self.bump()?;
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: self.current.0,
                message: format!("expected {tok:?}, found {:?}", self.current.1),
            })
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.current.1 {
                Tok::Plus => {
                    self.bump()?;
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump()?;
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            match self.current.1 {
                Tok::Star => {
                    self.bump()?;
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump()?;
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        match self.current.1 {
            Tok::Minus => {
                self.bump()?;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump()?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if self.current.1 == Tok::Caret {
            self.bump()?;
            let exponent = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node> {
        let (offset, tok) = self.bump()?;
        match tok {
            Tok::Num(v) => Ok(Node::Const(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(name, offset),
            Tok::End => Err(Error::Syntax {
                offset,
                message: "unexpected end of input".into(),
            }),
            other => Err(Error::Syntax {
                offset,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }

    fn identifier(&mut self, name: String, offset: usize) -> Result<Node> {
        if self.current.1 == Tok::LParen {
            let func = Func::from_name(&name).ok_or_else(|| Error::UnknownIdentifier {
                name: name.clone(),
                offset,
            })?;
            self.bump()?;
            let arg = self.expr()?;
            self.expect(Tok::RParen)?;
            return Ok(Node::Call(func, Box::new(arg)));
        }
        if name == self.variable {
            return Ok(Node::Var);
        }
        if let Some(&v) = self.params.get(&name) {
            return Ok(Node::Const(v));
        }
        match name.as_str() {
            "pi" => Ok(Node::Const(std::f64::consts::PI)),
            "e" => Ok(Node::Const(std::f64::consts::E)),
            _ if VARIABLE_NAMES.contains(&name.as_str()) => Err(Error::WrongVariable {
                found: name,
                expected: self.variable.to_string(),
                offset,
            }),
            _ => Err(Error::UnknownIdentifier { name, offset }),
        }
    }
}
