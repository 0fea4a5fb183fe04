use std::collections::HashMap;

use num_traits::Zero;

use super::lexer::{describe, syntax, Cursor, Tok};
use super::pbif::parse_decimal;
use crate::algebra::{ParamId, Polynomial, Rational};
use crate::error::Result;

/// Polynomial expressions over named parameters: `+ - *`, unary signs,
/// `^k`, parentheses and `a/b` literals.
pub(crate) struct Expr<'a> {
    pub cur: &'a mut Cursor,
    pub names: &'a HashMap<String, usize>,
    pub nvars: usize,
}

impl Expr<'_> {
    pub fn sum(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            if self.cur.eat_punct("+") {
                acc = &acc + &self.term()?;
            } else if self.cur.eat_punct("-") {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.cur.eat_punct("*") {
            acc = &acc * &self.unary()?;
        }
        if self.cur.at_punct("/") {
            return self.cur.error("division is only allowed between numeric literals");
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if self.cur.eat_punct("-") {
            return Ok(-&self.unary()?);
        }
        if self.cur.eat_punct("+") {
            return self.unary();
        }
        let base = self.primary()?;
        if self.cur.eat_punct("^") {
            let t = self.cur.next();
            let k: u32 = match &t.tok {
                Tok::Number(s) => s
                    .parse()
                    .map_err(|_| syntax(t.line, t.col, "exponent must be a nonnegative integer"))?,
                _ => return Err(syntax(t.line, t.col, "exponent must be a nonnegative integer")),
            };
            let mut out = Polynomial::one(self.nvars);
            for _ in 0..k {
                out = &out * &base;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Polynomial> {
        let t = self.cur.peek().clone();
        match &t.tok {
            Tok::Number(_) => Ok(Polynomial::constant(self.nvars, unsigned_literal(self.cur)?)),
            Tok::Ident(name) => {
                self.cur.next();
                match self.names.get(name) {
                    Some(&i) => Ok(Polynomial::var(self.nvars, ParamId(i))),
                    None => Err(syntax(t.line, t.col, &format!("undeclared parameter `{name}`"))),
                }
            }
            Tok::Punct("(") => {
                self.cur.next();
                let e = self.sum()?;
                self.cur.expect_punct(")")?;
                Ok(e)
            }
            other => self.cur.error(&format!("expected expression, found {}", describe(other))),
        }
    }
}

/// A decimal literal, or `a/b` of two decimal literals.
pub(crate) fn unsigned_literal(cur: &mut Cursor) -> Result<Rational> {
    let t = cur.next();
    let Tok::Number(s) = &t.tok else {
        return Err(syntax(t.line, t.col, &format!("expected number, found {}", describe(&t.tok))));
    };
    let mut v = parse_decimal(s).ok_or_else(|| syntax(t.line, t.col, "malformed number"))?;
    if cur.at_punct("/") && matches!(cur.peek_at(1).tok, Tok::Number(_)) {
        cur.next();
        let d = cur.next();
        let Tok::Number(ds) = &d.tok else { unreachable!() };
        let den = parse_decimal(ds).ok_or_else(|| syntax(d.line, d.col, "malformed number"))?;
        if den.is_zero() {
            return Err(syntax(d.line, d.col, "division by zero"));
        }
        v /= den;
    }
    Ok(v)
}
