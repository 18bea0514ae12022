//! Text grammar for expressions:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?
//! exponent:= '-'? integer | '(' '-'? integer ')'
//! atom    := number | 'x' index | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Numbers are integers or decimals and are read exactly; `p/q` is an
//! ordinary quotient that folds to a rational constant. Whitespace is ignored.

use nash_atlas_core::expr::{DomainBox, NashExpr, Node, Polynomial};
use nash_atlas_core::Q;
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected {found} at byte {at}")]
    Unexpected { found: String, at: usize },
    #[error("unexpected end of input")]
    Eof,
    #[error("variable x{index} needs arity at least {index}, but the arity is {arity}")]
    ArityExceeded { index: usize, arity: usize },
    #[error("variables are numbered from x1")]
    ZeroVariable,
    #[error("exponent {0} is too large")]
    ExponentTooLarge(String),
    #[error("expression is not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("expected a rational constant, found {0}")]
    NotConstant(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Int(u64),
    Var(usize),
    Sqrt,
    Op(char),
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Int(v) => format!("number {v}"),
        Tok::Var(i) => format!("x{i}"),
        Tok::Sqrt => "sqrt".into(),
        Tok::Op(c) => format!("'{c}'"),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let int_part = &src[start..i];
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                let frac_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let frac = &src[frac_start..i];
                if int_part.is_empty() && frac.is_empty() {
                    return Err(ParseError::Unexpected { found: "'.'".into(), at: start });
                }
                let digits = format!("{int_part}{frac}");
                let numer: BigInt = digits.parse().expect("digits");
                let denom = num_traits::pow(BigInt::from(10), frac.len());
                out.push((Tok::Num(Q::new(numer, denom)), start));
            } else {
                let tok = match int_part.parse::<u64>() {
                    Ok(v) => Tok::Int(v),
                    Err(_) => Tok::Num(Q::from_integer(int_part.parse().expect("digits"))),
                };
                out.push((tok, start));
            }
            continue;
        }
        if c == b'x' {
            i += 1;
            let ds = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if ds == i {
                return Err(ParseError::Unexpected { found: "'x' without an index".into(), at: start });
            }
            let idx: usize = src[ds..i]
                .parse()
                .map_err(|_| ParseError::Unexpected { found: src[start..i].into(), at: start })?;
            if idx == 0 {
                return Err(ParseError::ZeroVariable);
            }
            out.push((Tok::Var(idx), start));
            continue;
        }
        if src[i..].starts_with("sqrt") {
            i += 4;
            out.push((Tok::Sqrt, start));
            continue;
        }
        if b"+-*/^()".contains(&c) {
            i += 1;
            out.push((Tok::Op(c as char), start));
            continue;
        }
        let ch = src[i..].chars().next().expect("in bounds");
        return Err(ParseError::Unexpected { found: format!("'{ch}'"), at: start });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    max_var: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone()).ok_or(ParseError::Eof)?;
        self.pos += 1;
        Ok(t)
    }

    fn unexpected(&self) -> ParseError {
        match self.toks.get(self.pos) {
            Some((t, at)) => ParseError::Unexpected { found: describe(t), at: *at },
            None => ParseError::Eof,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { Node::add(acc, rhs) } else { Node::sub(acc, rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' { Node::mul(acc, rhs) } else { Node::div(acc, rhs) };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Node::sub(Node::constant(Q::zero()), inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let (negative, n) = self.exponent()?;
        let mut acc = Node::constant(Q::one());
        for _ in 0..n {
            acc = Node::mul(acc, base.clone());
        }
        Ok(if negative { Node::div(Node::constant(Q::one()), acc) } else { acc })
    }

    fn exponent(&mut self) -> Result<(bool, u64), ParseError> {
        let paren = self.peek() == Some(&Tok::Op('('));
        if paren {
            self.pos += 1;
        }
        let negative = self.peek() == Some(&Tok::Op('-'));
        if negative {
            self.pos += 1;
        }
        let n = match self.peek() {
            Some(Tok::Int(n)) => *n,
            Some(Tok::Num(v)) if v.is_integer() => return Err(ParseError::ExponentTooLarge(v.to_string())),
            _ => return Err(self.unexpected()),
        };
        if n > 64 {
            return Err(ParseError::ExponentTooLarge(n.to_string()));
        }
        self.pos += 1;
        if paren {
            self.expect(')')?;
        }
        Ok((negative, n))
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let at = self.pos;
        match self.next()? {
            Tok::Int(v) => Ok(Node::constant(Q::from_integer(v.into()))),
            Tok::Num(v) => Ok(Node::constant(v)),
            Tok::Var(i) => {
                self.max_var = self.max_var.max(i);
                Ok(Node::Var(i - 1))
            }
            Tok::Sqrt => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(Node::sqrt(inner))
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            _ => {
                self.pos = at;
                Err(self.unexpected())
            }
        }
    }
}

/// Parses an expression. With `arity = None` the arity is the largest
/// variable index that occurs.
pub fn parse_expr(src: &str, arity: Option<usize>) -> Result<NashExpr, ParseError> {
    let (node, max_var) = parse_node(src)?;
    let arity = match arity {
        Some(a) if max_var > a => return Err(ParseError::ArityExceeded { index: max_var, arity: a }),
        Some(a) => a,
        None => max_var,
    };
    Ok(NashExpr::from_node(arity, DomainBox::unbounded(arity), node))
}

/// Parses a tree and reports the largest variable index (0 if none).
pub fn parse_node(src: &str) -> Result<(Node, usize), ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, max_var: 0 };
    let node = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok((node, p.max_var))
}

pub fn parse_polynomial(src: &str, arity: Option<usize>) -> Result<Polynomial, ParseError> {
    let e = parse_expr(src, arity)?;
    e.to_polynomial().ok_or_else(|| ParseError::NotPolynomial(src.trim().into()))
}

pub fn parse_rational(src: &str) -> Result<Q, ParseError> {
    let e = parse_expr(src, Some(0))?;
    e.eval_q(&[]).map_err(|_| ParseError::NotConstant(src.trim().into()))
}

#[cfg(test)]
mod tests;
