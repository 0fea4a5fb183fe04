use std::collections::HashMap;
use std::io::Write;
use std::sync::Arc;

use super::expr::Expr;
use super::lexer::{syntax, Cursor};
use super::query::parse_number;
use crate::algebra::{fmt_rat, Parameter, ParameterSet, Polynomial, RationalFunction};
use crate::bn::Variable;
use crate::error::{Error, Result};
use crate::pmc::{Pmc, PmcState};

/// Writes the chain in the line-oriented explicit format:
///
/// ```text
/// pmc
/// parameter p [1/1000, 999/1000]
/// variable Pregnancy {no, yes}
/// levels 3
/// initial 0
/// state 0 [init, level=0]
///   -> 1 : 13/100
/// ```
///
/// Self-loops are written `-> self`.
pub fn write_explicit_pmc(m: &Pmc, sink: &mut impl Write) -> Result<()> {
    let names = m.params().names();
    writeln!(sink, "pmc")?;
    for p in m.params().iter() {
        writeln!(sink, "parameter {} [{}, {}]", p.name, fmt_rat(&p.lower), fmt_rat(&p.upper))?;
    }
    for v in m.variables() {
        writeln!(sink, "variable {} {{{}}}", v.name, v.values.join(", "))?;
    }
    writeln!(sink, "levels {}", m.final_level())?;
    writeln!(sink, "initial {}", m.initial())?;
    for s in 0..m.num_states() {
        writeln!(sink, "state {s} [{}]", m.state_labels(s).join(", "))?;
        for (t, f) in m.successors(s) {
            let dst = if *t == s { "self".to_string() } else { t.to_string() };
            writeln!(sink, "  -> {dst} : {}", f.render(&names))?;
        }
    }
    Ok(())
}

pub fn explicit_pmc_string(m: &Pmc) -> String {
    let mut buf = Vec::new();
    write_explicit_pmc(m, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("output is UTF-8")
}

/// Reads the format produced by [`write_explicit_pmc`].
pub fn read_explicit_pmc(src: &str) -> Result<Pmc> {
    let mut params = Vec::new();
    let mut variables: Vec<Variable> = Vec::new();
    let mut levels = None;
    let mut initial = None;
    let mut states: Vec<PmcState> = Vec::new();
    let mut transitions: Vec<Vec<(usize, RationalFunction)>> = Vec::new();
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut seen_header = false;

    for (k, raw) in src.lines().enumerate() {
        let line_no = k + 1;
        let err = |msg: &str| syntax(line_no, 1, msg);
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        if !seen_header {
            if line != "pmc" {
                return Err(err("expected `pmc` header"));
            }
            seen_header = true;
            continue;
        }
        let (word, rest) = line.split_once(' ').unwrap_or((line, ""));
        let rest = rest.trim();
        match word {
            "parameter" => {
                if !states.is_empty() {
                    return Err(err("parameters must precede states"));
                }
                let (name, bounds) = rest.split_once(' ').ok_or_else(|| err("expected `name [lo, hi]`"))?;
                let inner = bounds
                    .trim()
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| err("expected `[lo, hi]`"))?;
                let (lo, hi) = inner.split_once(',').ok_or_else(|| err("expected `[lo, hi]`"))?;
                let lo = parse_number(lo.trim()).ok_or_else(|| err("malformed lower bound"))?;
                let hi = parse_number(hi.trim()).ok_or_else(|| err("malformed upper bound"))?;
                names.insert(name.to_string(), params.len());
                params.push(Parameter::new(name, lo, hi).map_err(|e| err(&e.to_string()))?);
            }
            "variable" => {
                let (name, dom) = rest.split_once(' ').ok_or_else(|| err("expected `name {values}`"))?;
                let inner = dom
                    .trim()
                    .strip_prefix('{')
                    .and_then(|d| d.strip_suffix('}'))
                    .ok_or_else(|| err("expected `{values}`"))?;
                let values: Vec<&str> = inner.split(',').map(str::trim).collect();
                variables.push(Variable::new(name, &values));
            }
            "levels" => levels = Some(rest.parse::<usize>().map_err(|_| err("malformed level count"))?),
            "initial" => initial = Some(rest.parse::<usize>().map_err(|_| err("malformed initial state"))?),
            "state" => {
                let (id, labels) = rest.split_once(' ').unwrap_or((rest, ""));
                let id: usize = id.parse().map_err(|_| err("malformed state id"))?;
                if id != states.len() {
                    return Err(err(&format!("expected state {}, found {id}", states.len())));
                }
                let inner = labels
                    .trim()
                    .strip_prefix('[')
                    .and_then(|l| l.strip_suffix(']'))
                    .ok_or_else(|| err("expected `[labels]`"))?;
                let mut st = PmcState { level: 0, valuation: vec![None; variables.len()] };
                for label in inner.split(',').map(str::trim).filter(|l| !l.is_empty()) {
                    if label == "init" || label == "final" {
                        continue;
                    }
                    let (key, value) = label.split_once('=').ok_or_else(|| err(&format!("bad label `{label}`")))?;
                    if key == "level" {
                        st.level = value.parse().map_err(|_| err("malformed level"))?;
                        continue;
                    }
                    let v = variables
                        .iter()
                        .position(|v| v.name == key)
                        .ok_or_else(|| err(&format!("unknown variable `{key}`")))?;
                    let d = variables[v]
                        .value_index(value)
                        .ok_or_else(|| err(&format!("`{value}` is not a value of `{key}`")))?;
                    st.valuation[v] = Some(d);
                }
                states.push(st);
                transitions.push(Vec::new());
            }
            "->" => {
                let s = states.len().checked_sub(1).ok_or_else(|| err("transition before any state"))?;
                let (dst, f) = rest.split_once(':').ok_or_else(|| err("expected `-> dst : function`"))?;
                let dst = match dst.trim() {
                    "self" => s,
                    t => t.parse().map_err(|_| err("malformed destination"))?,
                };
                let f = function(f.trim(), &names, params.len(), line_no)?;
                transitions[s].push((dst, f));
            }
            _ => return Err(err(&format!("unexpected `{word}`"))),
        }
    }
    if !seen_header {
        return Err(syntax(1, 1, "expected `pmc` header"));
    }
    let ps = ParameterSet::new(params)?;
    let levels = levels.ok_or_else(|| Error::InvalidModel("missing `levels` line".into()))?;
    let initial = initial.ok_or_else(|| Error::InvalidModel("missing `initial` line".into()))?;
    Pmc::new(Arc::new(ps), variables, states, transitions, initial, levels)
}

fn function(src: &str, names: &HashMap<String, usize>, nvars: usize, line: usize) -> Result<RationalFunction> {
    let poly = |s: &str| -> Result<Polynomial> {
        let mut cur = Cursor::new(s).map_err(|e| relocate(e, line))?;
        let p = Expr { cur: &mut cur, names, nvars }.sum().map_err(|e| relocate(e, line))?;
        if !cur.at_eof() {
            return Err(syntax(line, 1, "trailing input after expression"));
        }
        Ok(p)
    };
    let split = src
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .and_then(|s| s.split_once(") / ("));
    match split {
        Some((num, den)) => RationalFunction::new(poly(num)?, poly(den)?).map_err(|_| syntax(line, 1, "zero denominator")),
        None => Ok(RationalFunction::from_poly(poly(src)?)),
    }
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Syntax { message, .. } => syntax(line, 1, &message),
        other => other,
    }
}
