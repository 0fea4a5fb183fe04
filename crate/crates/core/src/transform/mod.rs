//! Compilation of a pBN into a layered pMC, optionally tailored to evidence.
//!
//! Level `j` of the chain decides the `j`-th variable of the topological
//! order. A state remembers the variable just decided plus the *open*
//! variables: those decided earlier that some later level still needs.

use std::collections::{HashMap, VecDeque};

use crate::algebra::{Polynomial, RationalFunction};
use crate::bn::{Assignment, Pbn, VarId};
use crate::error::{Error, Result};
use crate::pmc::{Pmc, PmcState};

/// Variables open at level `j` (1-based) under `order`: decided before
/// level `j` and with a child decided after it.
pub fn open_set(b: &Pbn, order: &[VarId], j: usize) -> Vec<VarId> {
    let pos = positions(b, order);
    let last = last_child_levels(b, &pos);
    order
        .iter()
        .copied()
        .filter(|v| pos[v.0] < j && j < last[v.0])
        .collect()
}

/// 1-based level of every variable.
fn positions(b: &Pbn, order: &[VarId]) -> Vec<usize> {
    let mut pos = vec![0; b.num_vars()];
    for (i, v) in order.iter().enumerate() {
        pos[v.0] = i + 1;
    }
    pos
}

/// Level of the last child of every variable (0 when childless).
fn last_child_levels(b: &Pbn, pos: &[usize]) -> Vec<usize> {
    let mut last = vec![0; b.num_vars()];
    for (p, c) in b.edges() {
        last[p.0] = last[p.0].max(pos[c.0]);
    }
    last
}

/// The query-agnostic chain.
pub fn build_pmc(b: &Pbn, order: &[VarId]) -> Result<Pmc> {
    build(b, order, &Assignment::empty(), &[])
}

/// Chain in which every transition into an evidence-violating state is sent
/// back to the initial state. Variables in `keep_open` stay remembered up to
/// the final level.
pub fn build_evidence_pmc(
    b: &Pbn,
    order: &[VarId],
    evidence: &Assignment,
    keep_open: &[VarId],
) -> Result<Pmc> {
    if evidence.is_empty() {
        return Err(Error::EmptyEvidence);
    }
    build(b, order, evidence, keep_open)
}

/// Chain whose final states carry the hypothesis variables, so that
/// `P(hypothesis | evidence)` is the probability of reaching a final state
/// satisfying the hypothesis. Evidence may be empty.
pub fn build_query_pmc(
    b: &Pbn,
    order: &[VarId],
    hypothesis: &Assignment,
    evidence: &Assignment,
) -> Result<Pmc> {
    build(b, order, evidence, &hypothesis.variables())
}

fn build(b: &Pbn, order: &[VarId], evidence: &Assignment, keep_open: &[VarId]) -> Result<Pmc> {
    b.check_order(order)?;
    let m = order.len();
    let n = b.nparams();
    let pos = positions(b, order);
    let mut last = last_child_levels(b, &pos);
    if let Some(k) = evidence.pairs().iter().map(|(v, _)| pos[v.0]).max() {
        for v in order {
            if evidence.value_of(*v).is_none() && pos[v.0] < k {
                last[v.0] = last[v.0].max(k);
            }
        }
    }
    for v in keep_open {
        last[v.0] = m + 1;
    }

    let init = PmcState { level: 0, valuation: vec![None; b.num_vars()] };
    let mut index: HashMap<PmcState, usize> = HashMap::new();
    let mut states = vec![init.clone()];
    let mut transitions: Vec<Vec<(usize, RationalFunction)>> = vec![Vec::new()];
    index.insert(init, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let st = states[s].clone();
        if st.level == m {
            transitions[s] = vec![(s, RationalFunction::one(n))];
            continue;
        }
        let j = st.level + 1;
        let v = order[j - 1];
        let row = b.row_index(v, |p| {
            st.valuation[p.0].expect("parents of the next variable are remembered")
        });
        let mut out = Vec::new();
        let mut restart = Polynomial::zero(n);
        for (d, f) in b.cpt(v).rows[row].iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            if evidence.value_of(v).is_some_and(|e| e != d) {
                restart = &restart + f;
                continue;
            }
            let mut valuation = vec![None; b.num_vars()];
            for w in &order[..j - 1] {
                if j < last[w.0] {
                    valuation[w.0] = st.valuation[w.0];
                }
            }
            valuation[v.0] = Some(d);
            let next = PmcState { level: j, valuation };
            let t = match index.get(&next) {
                Some(&t) => t,
                None => {
                    let t = states.len();
                    index.insert(next.clone(), t);
                    states.push(next);
                    transitions.push(Vec::new());
                    queue.push_back(t);
                    t
                }
            };
            out.push((t, RationalFunction::from_poly(f.clone())));
        }
        if !restart.is_zero() {
            out.push((0, RationalFunction::from_poly(restart)));
        }
        transitions[s] = out;
    }
    Pmc::new(b.params_arc(), b.variables().to_vec(), states, transitions, 0, m)
}
