use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Pow;

use super::expr::{unsigned_literal, Expr};
use super::lexer::{describe, syntax, Cursor, Tok, Token};
use crate::algebra::{fmt_rat, ratio, Parameter, ParameterSet, Polynomial, Rational};
use crate::bn::{Cpt, Pbn, VarId, Variable};
use crate::error::Result;

/// Parses a `.pbif` model. Plain BIF files are accepted and yield a network
/// without parameters. Row sums are not checked here; see [`Pbn::validate`].
pub fn parse_pbif(src: &str) -> Result<Pbn> {
    Parser::new(src)?.document()
}

/// Parses a decimal (`0.893`, `1e-6`) or integer literal exactly.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        Rational::from_integer(digits * Pow::pow(&ten, scale as u32))
    } else {
        Rational::new(digits, Pow::pow(&ten, (-scale) as u32))
    })
}

/// Default bounds for a parameter declared without an interval.
pub fn default_bounds() -> (Rational, Rational) {
    (ratio(1, 1_000_000), ratio(999_999, 1_000_000))
}

struct Parser {
    cur: Cursor,
    params: Vec<Parameter>,
    param_index: HashMap<String, usize>,
}

struct VarDecl {
    var: Variable,
    at: Token,
}

struct ProbBlock {
    owner: Token,
    parents: Vec<Token>,
    rows: Vec<(Option<Vec<(String, Token)>>, Vec<Polynomial>, Token)>,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            cur: Cursor::new(src)?,
            params: Vec::new(),
            param_index: HashMap::new(),
        })
    }

    fn document(mut self) -> Result<Pbn> {
        let mut name = String::from("unnamed");
        let mut vars: Vec<VarDecl> = Vec::new();
        let mut probs: Vec<ProbBlock> = Vec::new();
        while !self.cur.at_eof() {
            let kw = self.cur.ident()?;
            match &kw.tok {
                Tok::Ident(k) if k == "network" => {
                    name = match self.cur.next().tok {
                        Tok::Ident(s) | Tok::Str(s) | Tok::Number(s) => s,
                        other => {
                            return Err(syntax(kw.line, kw.col, &format!(
                                "expected network name, found {}",
                                describe(&other)
                            )))
                        }
                    };
                    self.cur.expect_punct("{")?;
                    self.skip_properties()?;
                    self.cur.expect_punct("}")?;
                }
                Tok::Ident(k) if k == "parameters" => self.parameters()?,
                Tok::Ident(k) if k == "variable" => vars.push(self.variable()?),
                Tok::Ident(k) if k == "probability" => probs.push(self.probability()?),
                _ => {
                    return Err(syntax(kw.line, kw.col, &format!(
                        "expected `network`, `parameters`, `variable` or `probability`, found {}",
                        describe(&kw.tok)
                    )))
                }
            }
        }
        lower(name, std::mem::take(&mut self.params), vars, probs)
    }

    /// Skips `property ... ;` entries.
    fn skip_properties(&mut self) -> Result<()> {
        while self.cur.at_keyword("property") {
            while !self.cur.eat_punct(";") {
                if self.cur.at_eof() {
                    return self.cur.error("unterminated property");
                }
                self.cur.next();
            }
        }
        Ok(())
    }

    fn parameters(&mut self) -> Result<()> {
        self.cur.expect_punct("{")?;
        while !self.cur.eat_punct("}") {
            let t = self.cur.ident()?;
            let Tok::Ident(name) = t.tok.clone() else { unreachable!() };
            let (lo, hi) = if self.cur.at_keyword("in") {
                self.cur.next();
                self.cur.expect_punct("[")?;
                let lo = self.literal()?;
                self.cur.expect_punct(",")?;
                let hi = self.literal()?;
                self.cur.expect_punct("]")?;
                (lo, hi)
            } else {
                default_bounds()
            };
            self.cur.expect_punct(";")?;
            if self.param_index.contains_key(&name) {
                return Err(syntax(t.line, t.col, &format!("parameter `{name}` declared twice")));
            }
            let p = Parameter::new(name.clone(), lo, hi)
                .map_err(|e| syntax(t.line, t.col, &e.to_string()))?;
            self.param_index.insert(name, self.params.len());
            self.params.push(p);
        }
        Ok(())
    }

    /// Signed numeric literal, optionally `a/b`.
    fn literal(&mut self) -> Result<Rational> {
        let neg = self.cur.eat_punct("-");
        let v = self.unsigned_literal()?;
        Ok(if neg { -v } else { v })
    }

    fn unsigned_literal(&mut self) -> Result<Rational> {
        unsigned_literal(&mut self.cur)
    }

    fn variable(&mut self) -> Result<VarDecl> {
        let at = self.cur.ident()?;
        let Tok::Ident(name) = at.tok.clone() else { unreachable!() };
        self.cur.expect_punct("{")?;
        let mut values = None;
        while !self.cur.eat_punct("}") {
            if self.cur.at_keyword("property") {
                self.skip_properties()?;
                continue;
            }
            self.cur.expect_keyword("type")?;
            self.cur.expect_keyword("discrete")?;
            self.cur.expect_punct("[")?;
            let nt = self.cur.next();
            let n: usize = match &nt.tok {
                Tok::Number(s) => s.parse().map_err(|_| syntax(nt.line, nt.col, "expected domain size"))?,
                _ => return Err(syntax(nt.line, nt.col, "expected domain size")),
            };
            self.cur.expect_punct("]")?;
            self.cur.expect_punct("{")?;
            let mut vals = Vec::new();
            loop {
                vals.push(self.cur.label()?.0);
                if !self.cur.eat_punct(",") {
                    break;
                }
            }
            self.cur.expect_punct("}")?;
            self.cur.expect_punct(";")?;
            if vals.len() != n {
                return Err(syntax(nt.line, nt.col, &format!(
                    "`{name}` declares {n} values but lists {}",
                    vals.len()
                )));
            }
            values = Some(vals);
        }
        let values = values.ok_or_else(|| syntax(at.line, at.col, &format!("`{name}` has no type declaration")))?;
        Ok(VarDecl { var: Variable { name, values }, at })
    }

    fn probability(&mut self) -> Result<ProbBlock> {
        self.cur.expect_punct("(")?;
        let owner = self.cur.ident()?;
        let mut parents = Vec::new();
        if self.cur.eat_punct("|") {
            loop {
                parents.push(self.cur.ident()?);
                if !self.cur.eat_punct(",") {
                    break;
                }
            }
        }
        self.cur.expect_punct(")")?;
        self.cur.expect_punct("{")?;
        let mut rows = Vec::new();
        while !self.cur.eat_punct("}") {
            if self.cur.at_keyword("property") {
                self.skip_properties()?;
                continue;
            }
            let at = self.cur.peek().clone();
            let key = if self.cur.at_keyword("table") {
                self.cur.next();
                None
            } else {
                self.cur.expect_punct("(")?;
                let mut key = Vec::new();
                loop {
                    key.push(self.cur.label()?);
                    if !self.cur.eat_punct(",") {
                        break;
                    }
                }
                self.cur.expect_punct(")")?;
                Some(key)
            };
            let mut entries = Vec::new();
            loop {
                entries.push(self.expr()?);
                if !self.cur.eat_punct(",") {
                    break;
                }
            }
            self.cur.expect_punct(";")?;
            rows.push((key, entries, at));
        }
        Ok(ProbBlock { owner, parents, rows })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        Expr { cur: &mut self.cur, names: &self.param_index, nvars: self.params.len() }.sum()
    }
}

fn lower(name: String, params: Vec<Parameter>, vars: Vec<VarDecl>, probs: Vec<ProbBlock>) -> Result<Pbn> {
    let mut index = HashMap::new();
    for (i, d) in vars.iter().enumerate() {
        if index.insert(d.var.name.clone(), i).is_some() {
            return Err(syntax(d.at.line, d.at.col, &format!("variable `{}` declared twice", d.var.name)));
        }
    }
    let lookup = |t: &Token| -> Result<usize> {
        let Tok::Ident(n) = &t.tok else { unreachable!() };
        index
            .get(n)
            .copied()
            .ok_or_else(|| syntax(t.line, t.col, &format!("undeclared variable `{n}`")))
    };
    let variables: Vec<Variable> = vars.iter().map(|d| d.var.clone()).collect();
    let nvars = params.len();
    let mut cpts: Vec<Option<Cpt>> = vec![None; variables.len()];
    for block in probs {
        let owner = lookup(&block.owner)?;
        if cpts[owner].is_some() {
            return Err(syntax(block.owner.line, block.owner.col, &format!(
                "second probability block for `{}`",
                variables[owner].name
            )));
        }
        let parents = block.parents.iter().map(&lookup).collect::<Result<Vec<_>>>()?;
        let nrows: usize = parents.iter().map(|&p| variables[p].arity()).product();
        let mut rows: Vec<Option<Vec<Polynomial>>> = vec![None; nrows];
        for (key, entries, at) in block.rows {
            let idx = match key {
                None if parents.is_empty() => 0,
                None => return Err(syntax(at.line, at.col, "`table` rows need a parentless variable")),
                Some(key) => {
                    if key.len() != parents.len() {
                        return Err(syntax(at.line, at.col, &format!(
                            "row names {} parent values, expected {}",
                            key.len(),
                            parents.len()
                        )));
                    }
                    let mut idx = 0;
                    for ((label, t), &p) in key.iter().zip(&parents) {
                        let d = variables[p].value_index(label).ok_or_else(|| {
                            syntax(t.line, t.col, &format!(
                                "`{label}` is not a value of `{}`",
                                variables[p].name
                            ))
                        })?;
                        idx = idx * variables[p].arity() + d;
                    }
                    idx
                }
            };
            if entries.len() != variables[owner].arity() {
                return Err(syntax(at.line, at.col, &format!(
                    "row has {} entries, `{}` has {} values",
                    entries.len(),
                    variables[owner].name,
                    variables[owner].arity()
                )));
            }
            if rows[idx].is_some() {
                return Err(syntax(at.line, at.col, "row given twice"));
            }
            rows[idx] = Some(entries.into_iter().map(|e| pad(e, nvars)).collect());
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(r, row)| {
                row.ok_or_else(|| syntax(block.owner.line, block.owner.col, &format!(
                    "probability block for `{}` misses row {r}",
                    variables[owner].name
                )))
            })
            .collect::<Result<Vec<_>>>()?;
        cpts[owner] = Some(Cpt { parents: parents.into_iter().map(VarId).collect(), rows });
    }
    let cpts = cpts
        .into_iter()
        .zip(&vars)
        .map(|(c, d)| {
            c.ok_or_else(|| syntax(d.at.line, d.at.col, &format!("no probability block for `{}`", d.var.name)))
        })
        .collect::<Result<Vec<_>>>()?;
    Pbn::new(name, ParameterSet::new(params)?, variables, cpts)
}

/// Widens expressions parsed before a later `parameters` block.
fn pad(e: Polynomial, nvars: usize) -> Polynomial {
    if e.nvars() == nvars {
        e
    } else {
        let terms: Vec<(Vec<u32>, Rational)> = e
            .terms()
            .map(|(m, c)| {
                let mut exps = m.exponents().to_vec();
                exps.resize(nvars, 0);
                (exps, c.clone())
            })
            .collect();
        Polynomial::from_terms(nvars, terms)
    }
}

/// Renders a pBN in the `.pbif` syntax accepted by [`parse_pbif`].
pub fn render_pbif(b: &Pbn) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "network {} {{\n}}", b.name());
    if !b.params().is_empty() {
        s.push_str("parameters {\n");
        for p in b.params().iter() {
            let _ = writeln!(s, "  {} in [{}, {}];", p.name, fmt_rat(&p.lower), fmt_rat(&p.upper));
        }
        s.push_str("}\n");
    }
    for v in b.variables() {
        let _ = writeln!(
            s,
            "variable {} {{\n  type discrete [ {} ] {{ {} }};\n}}",
            v.name,
            v.arity(),
            v.values.join(", ")
        );
    }
    let names = b.params().names();
    for v in b.var_ids() {
        let parents = b.parents(v);
        let head = if parents.is_empty() {
            b.variable(v).name.clone()
        } else {
            let ps: Vec<&str> = parents.iter().map(|&p| b.variable(p).name.as_str()).collect();
            format!("{} | {}", b.variable(v).name, ps.join(", "))
        };
        let _ = writeln!(s, "probability ( {head} ) {{");
        for (r, row) in b.cpt(v).rows.iter().enumerate() {
            let entries: Vec<String> = row.iter().map(|e| e.render(&names)).collect();
            if parents.is_empty() {
                let _ = writeln!(s, "  table {};", entries.join(", "));
            } else {
                let labels: Vec<&str> = b
                    .row_valuation(v, r)
                    .iter()
                    .zip(parents)
                    .map(|(&d, &p)| b.variable(p).values[d].as_str())
                    .collect();
                let _ = writeln!(s, "  ({}) {};", labels.join(", "), entries.join(", "));
            }
        }
        s.push_str("}\n");
    }
    s
}
