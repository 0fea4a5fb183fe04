use super::lexer::{describe, syntax, Cursor, Tok};
use super::pbif::parse_decimal;
use crate::algebra::{ratio, Instantiation, Rational};
use crate::bn::{Assignment, Comparison, Pbn, Query, QueryKind, Side};
use crate::error::{Error, Result};

/// Parses a constraint such as
/// `P(Pregnancy=yes | UrineTest=neg, BloodTest=neg) <= 0.2`,
/// `RATIO(A=1 : A=0 | B=1) >= 2` or `DIFF(A=1 - A=0 | B=1) >= 0`.
///
/// Writing the alternative after the evidence (`RATIO(A=1 | B=1 : B=0) >= 2`)
/// compares the hypothesis under two evidences instead.
pub fn parse_query(b: &Pbn, src: &str) -> Result<Query> {
    let mut cur = Cursor::new(src)?;
    let head = cur.ident()?;
    let Tok::Ident(h) = &head.tok else { unreachable!() };
    let kind = match h.as_str() {
        "P" => QueryKind::Probability,
        "RATIO" => QueryKind::Ratio,
        "DIFF" => QueryKind::Difference,
        other => {
            return Err(syntax(head.line, head.col, &format!(
                "expected `P`, `RATIO` or `DIFF`, found `{other}`"
            )))
        }
    };
    cur.expect_punct("(")?;
    let sep = match kind {
        QueryKind::Ratio => ":",
        _ => "-",
    };
    let hyp = assignment(&mut cur, b)?;
    let (alt, ev, side) = match kind {
        QueryKind::Probability => {
            let ev = if cur.eat_punct("|") { assignment(&mut cur, b)? } else { Assignment::empty() };
            (None, ev, Side::Hypothesis)
        }
        _ => {
            if cur.eat_punct(sep) {
                let alt = assignment(&mut cur, b)?;
                let ev = if cur.eat_punct("|") { assignment(&mut cur, b)? } else { Assignment::empty() };
                (Some(alt), ev, Side::Hypothesis)
            } else if cur.eat_punct("|") {
                let ev = assignment(&mut cur, b)?;
                cur.expect_punct(sep)?;
                (Some(assignment(&mut cur, b)?), ev, Side::Evidence)
            } else {
                return cur.error(&format!("expected `{sep}` or `|`"));
            }
        }
    };
    cur.expect_punct(")")?;
    let cmp_tok = cur.next();
    let cmp = match &cmp_tok.tok {
        Tok::Punct("<") => Comparison::Lt,
        Tok::Punct("<=") => Comparison::Le,
        Tok::Punct(">") => Comparison::Gt,
        Tok::Punct(">=") => Comparison::Ge,
        other => {
            return Err(syntax(cmp_tok.line, cmp_tok.col, &format!(
                "expected comparison, found {}",
                describe(other)
            )))
        }
    };
    let at = cur.peek().clone();
    let q = threshold(&mut cur)?;
    if !cur.at_eof() {
        return cur.error(&format!("unexpected {}", describe(&cur.peek().tok)));
    }
    let (lo, hi) = match kind {
        QueryKind::Probability => (Some(ratio(0, 1)), Some(ratio(1, 1))),
        QueryKind::Ratio => (Some(ratio(0, 1)), None),
        QueryKind::Difference => (Some(ratio(-1, 1)), Some(ratio(1, 1))),
    };
    if lo.as_ref().is_some_and(|l| &q < l) || hi.as_ref().is_some_and(|h| &q > h) {
        let range = match kind {
            QueryKind::Probability => "[0, 1]",
            QueryKind::Ratio => "[0, ∞)",
            QueryKind::Difference => "[-1, 1]",
        };
        return Err(syntax(at.line, at.col, &format!("threshold outside {range}")));
    }
    let wrap = |e: Error| match e {
        Error::InvalidQuery(m) => syntax(head.line, head.col, &m),
        other => other,
    };
    match alt {
        None => Query::probability(hyp, ev, cmp, q).map_err(wrap),
        Some(alt) => Query::compare(kind, side, hyp, alt, ev, cmp, q).map_err(wrap),
    }
}

fn threshold(cur: &mut Cursor) -> Result<Rational> {
    let neg = cur.eat_punct("-");
    let t = cur.next();
    let Tok::Number(s) = &t.tok else {
        return Err(syntax(t.line, t.col, &format!("expected threshold, found {}", describe(&t.tok))));
    };
    let mut v = parse_decimal(s).ok_or_else(|| syntax(t.line, t.col, "malformed number"))?;
    if cur.eat_punct("/") {
        let d = cur.next();
        let den = match &d.tok {
            Tok::Number(s) => parse_decimal(s),
            _ => None,
        }
        .filter(|x| *x != ratio(0, 1))
        .ok_or_else(|| syntax(d.line, d.col, "expected nonzero denominator"))?;
        v /= den;
    }
    Ok(if neg { -v } else { v })
}

fn assignment(cur: &mut Cursor, b: &Pbn) -> Result<Assignment> {
    let mut pairs = Vec::new();
    loop {
        let vt = cur.ident()?;
        let Tok::Ident(var) = &vt.tok else { unreachable!() };
        let v = b
            .find_var(var)
            .ok_or_else(|| syntax(vt.line, vt.col, &format!("unknown variable `{var}`")))?;
        cur.expect_punct("=")?;
        let (label, lt) = cur.label()?;
        let d = b.variable(v).value_index(&label).ok_or_else(|| {
            syntax(lt.line, lt.col, &format!("`{label}` is not a value of `{var}`"))
        })?;
        if pairs.iter().any(|&(w, _)| w == v) {
            return Err(syntax(vt.line, vt.col, &format!("`{var}` assigned twice")));
        }
        pairs.push((v, d));
        if !cur.eat_punct(",") {
            break;
        }
    }
    Assignment::new(pairs)
}

/// Parses `p=0.36,q=0.27`. Every parameter must be given exactly once.
pub fn parse_instantiation(b: &Pbn, src: &str) -> Result<Instantiation> {
    let params = b.params();
    let mut values: Vec<Option<Rational>> = vec![None; params.len()];
    for part in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, val) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected name=value, found `{part}`")))?;
        let id = params
            .find(name.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown parameter `{}`", name.trim())))?;
        let v = parse_number(val.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("malformed value `{}`", val.trim())))?;
        if values[id.0].replace(v).is_some() {
            return Err(Error::InvalidParameter(format!("`{}` given twice", name.trim())));
        }
    }
    let values = values
        .into_iter()
        .zip(params.iter())
        .map(|(v, p)| v.ok_or_else(|| Error::InvalidParameter(format!("no value for `{}`", p.name))))
        .collect::<Result<Vec<_>>>()?;
    Instantiation::new(params, values)
}

/// Decimal or `a/b` literal, optionally negative.
pub fn parse_number(s: &str) -> Option<Rational> {
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let d = parse_decimal(b.trim())?;
            if d == ratio(0, 1) {
                return None;
            }
            parse_decimal(a.trim())? / d
        }
        None => parse_decimal(s)?,
    };
    Some(if neg { -v } else { v })
}
