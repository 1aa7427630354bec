//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = ("-" | "+") unary | power ;
//! power   = primary [ "^" unary ] ;          (* right associative *)
//! primary = number | ident [ "(" expr ")" ] | "(" expr ")" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ident   = letter { letter | digit | "_" } ;
//! ```
//!
//! Exponents must reduce to rational constants. Decimal literals are read as
//! exact rationals. `pi` is the only built-in constant; function names are
//! `sin cos tan exp log sqrt`. Identifiers are case-sensitive.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use super::{BigRational, Function, Node, ScalarExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared symbol `{name}` at offset {offset}")]
    Undeclared { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::Undeclared { offset, .. } => *offset,
        }
    }
}

/// Set of identifiers an expression may reference.
#[derive(Debug, Clone, Default)]
pub struct Symbols {
    names: Option<BTreeSet<String>>,
}

impl Symbols {
    /// Accept every identifier.
    pub fn any() -> Self {
        Symbols { names: None }
    }

    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Symbols {
            names: Some(names.into_iter().map(Into::into).collect()),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.as_ref().is_none_or(|n| n.contains(name))
    }
}

/// Parse `text` into an expression tree.
pub fn parse(text: &str, symbols: &Symbols) -> Result<ScalarExpr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        symbols,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    symbols: &'a Symbols,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            ScalarExpr::from_node(Node::Add(terms))
        })
    }

    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat(b'*') {
                factors.push(self.unary()?);
            } else if self.eat(b'/') {
                let d = self.unary()?;
                factors.push(ScalarExpr::from_node(Node::Pow(d, -BigRational::one())));
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            ScalarExpr::from_node(Node::Mul(factors))
        })
    }

    fn unary(&mut self) -> Result<ScalarExpr, ParseError> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            // Fold a negated literal so that printing `-2` round-trips.
            if let Node::Num(r) = inner.node() {
                return Ok(ScalarExpr::num(-r.clone()));
            }
            return Ok(-inner);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarExpr, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let at = self.pos;
            let exponent = self.unary()?;
            let r = exponent.as_rational().ok_or(ParseError::Syntax {
                offset: at,
                message: "exponent must be a rational constant".into(),
            })?;
            return Ok(ScalarExpr::from_node(Node::Pow(base, r)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ScalarExpr, ParseError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<ScalarExpr, ParseError> {
        let start = self.pos;
        let mut digits = String::new();
        let mut scale: i64 = 0;
        let mut seen_dot = false;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                digits.push(c as char);
                if seen_dot {
                    scale += 1;
                }
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if digits.is_empty() {
            self.pos = start;
            return Err(self.err("malformed number"));
        }
        let mut exp10: i64 = 0;
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            let mut sign = 1;
            if let Some(&c) = self.src.get(self.pos) {
                if c == b'+' || c == b'-' {
                    if c == b'-' {
                        sign = -1;
                    }
                    self.pos += 1;
                }
            }
            let es = self.pos;
            while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if es == self.pos {
                // Not an exponent; leave `e` for the identifier rule.
                self.pos = save;
            } else {
                let text = std::str::from_utf8(&self.src[es..self.pos]).unwrap();
                exp10 = sign
                    * text
                        .parse::<i64>()
                        .map_err(|_| self.err("exponent too large"))?;
            }
        }
        let mantissa: BigInt = digits.parse().map_err(|_| self.err("malformed number"))?;
        let power = exp10 - scale;
        let ten = BigInt::from(10);
        let value = if power >= 0 {
            BigRational::from_integer(mantissa * num_traits::pow(ten, power as usize))
        } else {
            BigRational::new(mantissa, num_traits::pow(ten, (-power) as usize))
        };
        Ok(ScalarExpr::num(value))
    }

    fn ident(&mut self) -> Result<ScalarExpr, ParseError> {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_alphanumeric() || *c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string();
        if let Some(f) = Function::from_name(&name) {
            if !self.eat(b'(') {
                return Err(self.err(format!("expected `(` after `{name}`")));
            }
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected `)`"));
            }
            return Ok(ScalarExpr::func(f, arg));
        }
        if name == "pi"
            && !self
                .symbols
                .names
                .as_ref()
                .is_some_and(|n| n.contains("pi"))
        {
            return Ok(ScalarExpr::pi());
        }
        if !self.symbols.contains(&name) {
            return Err(ParseError::Undeclared {
                name,
                offset: start,
            });
        }
        Ok(ScalarExpr::from_node(Node::Sym(Arc::from(name.as_str()))))
    }
}

impl std::str::FromStr for ScalarExpr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s, &Symbols::any())
    }
}
