//! The polynomial/rational expression grammar.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | ident | "(" expr ")"
//! ident  := [a-z][a-z0-9_]*
//! ```
//!
//! `^` binds tightest and takes a non-negative integer exponent.  Whitespace
//! is insignificant.  Positions in errors are 1-based columns.

use thiserror::Error;

use crate::field::{ArithError, Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("unknown identifier {0}")]
    UnknownIdentifier(String),
    #[error("division by a non-constant polynomial in {0}")]
    NotPolynomial(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

impl ExprError {
    pub fn column(&self) -> Option<usize> {
        match self {
            ExprError::Syntax { col, .. } => Some(*col),
            _ => None,
        }
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<u64>().map_err(|_| ExprError::Syntax { col, msg: "integer too large".into() })?;
            out.push((Tok::Int(v), col));
        } else if c.is_ascii_lowercase() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_lowercase() || chars[i].is_ascii_digit() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ExprError::Syntax { col, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ExprError> {
        Err(ExprError::Syntax { col: self.col(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if c == '*' { Expr::Mul(lhs.into(), rhs.into()) } else { Expr::Div(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(self.unary()?.into()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    return Ok(Expr::Pow(base.into(), e));
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Int(v))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if let Some(Tok::Op(')')) = self.peek() {
                    self.pos += 1;
                    Ok(e)
                } else {
                    self.err("expected ')'")
                }
            }
            Some(_) => self.err("expected a number, identifier or '('"),
            None => self.err("unexpected end of expression"),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end_col: text.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Identifiers occurring in the expression, in first-occurrence order.
    pub fn identifiers(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_ids(&mut out);
        out
    }

    fn collect_ids(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_ids(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_ids(out);
                b.collect_ids(out);
            }
        }
    }
}

/// Evaluate in any field, resolving identifiers through `lookup`.
pub fn eval_with<F: Field>(
    e: &Expr,
    field: &F,
    lookup: &dyn Fn(&str) -> Option<F::Elem>,
) -> Result<F::Elem, ExprError> {
    Ok(match e {
        Expr::Int(v) => field.from_int((*v % field.characteristic() as u64) as i64),
        Expr::Var(s) => lookup(s).ok_or_else(|| ExprError::UnknownIdentifier(s.clone()))?,
        Expr::Neg(a) => field.neg(&eval_with(a, field, lookup)?),
        Expr::Add(a, b) => field.add(&eval_with(a, field, lookup)?, &eval_with(b, field, lookup)?),
        Expr::Sub(a, b) => field.sub(&eval_with(a, field, lookup)?, &eval_with(b, field, lookup)?),
        Expr::Mul(a, b) => field.mul(&eval_with(a, field, lookup)?, &eval_with(b, field, lookup)?),
        Expr::Div(a, b) => field.div(&eval_with(a, field, lookup)?, &eval_with(b, field, lookup)?)?,
        Expr::Pow(a, k) => field.pow(&eval_with(a, field, lookup)?, *k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("a + b * c ^ 2").unwrap();
        let want = Expr::Add(
            Expr::Var("a".into()).into(),
            Expr::Mul(Expr::Var("b".into()).into(), Expr::Pow(Expr::Var("c".into()).into(), 2).into()).into(),
        );
        assert_eq!(e, want);
        assert_eq!(parse(" -x^2 ").unwrap(), Expr::Neg(Expr::Pow(Expr::Var("x".into()).into(), 2).into()));
    }

    #[test]
    fn double_caret_reports_second_caret() {
        let err = parse("x^^2").unwrap_err();
        assert_eq!(err.column(), Some(3));
    }

    #[test]
    fn errors_carry_columns() {
        assert_eq!(parse("x + ").unwrap_err().column(), Some(5));
        assert_eq!(parse("(x").unwrap_err().column(), Some(3));
        assert_eq!(parse("x $ y").unwrap_err().column(), Some(3));
        assert_eq!(parse("X").unwrap_err().column(), Some(1));
    }
}
