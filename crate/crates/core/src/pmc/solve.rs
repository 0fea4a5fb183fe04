use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::model::{Mc, Pmc};
use crate::algebra::{Rational, RationalFunction};
use crate::error::{Error, Result};

/// States from which some state in `targets` is reachable along edges
/// accepted by `edge`.
pub(crate) fn backward_reach(
    n: usize,
    succ: impl Fn(usize) -> Vec<usize>,
    targets: &[bool],
) -> Vec<bool> {
    let mut pred = vec![Vec::new(); n];
    for s in 0..n {
        for t in succ(s) {
            pred[t].push(s);
        }
    }
    let mut seen = targets.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&s| targets[s]).collect();
    while let Some(t) = stack.pop() {
        for &s in &pred[t] {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
    }
    seen
}

/// Reverse topological order of the subgraph on `keep` (self-loops
/// ignored), or `None` if it has a cycle.
pub(crate) fn reverse_topological(
    n: usize,
    succ: impl Fn(usize) -> Vec<usize>,
    keep: &[bool],
) -> Option<Vec<usize>> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut mark = vec![0u8; n];
    let mut out = Vec::new();
    for root in (0..n).filter(|&s| keep[s]) {
        if mark[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, succ(root), 0usize)];
        mark[root] = 1;
        while let Some((s, next, i)) = stack.last_mut() {
            if *i < next.len() {
                let t = next[*i];
                *i += 1;
                if t == *s || !keep[t] {
                    continue;
                }
                match mark[t] {
                    0 => {
                        mark[t] = 1;
                        let ts = succ(t);
                        stack.push((t, ts, 0));
                    }
                    1 => return None,
                    _ => {}
                }
            } else {
                mark[*s] = 2;
                out.push(*s);
                stack.pop();
            }
        }
    }
    Some(out)
}

/// Solves `x_s = b_s + Σ_t a_{s,t} x_t` over the states marked in `maybe`,
/// with `rows[s]` listing `(t, a_{s,t})` restricted to maybe states. The
/// system must have a unique solution.
fn solve_linear(
    rows: &[Vec<(usize, Rational)>],
    rhs: &[Rational],
    maybe: &[bool],
) -> Vec<Rational> {
    let n = rows.len();
    let mut x = vec![Rational::zero(); n];
    let succ = |s: usize| rows[s].iter().map(|(t, _)| *t).collect::<Vec<_>>();
    if let Some(order) = reverse_topological(n, succ, maybe) {
        for s in order {
            let mut acc = rhs[s].clone();
            let mut stay = Rational::zero();
            for (t, a) in &rows[s] {
                if *t == s {
                    stay += a;
                } else {
                    acc += a * &x[*t];
                }
            }
            x[s] = acc / (Rational::one() - stay);
        }
        return x;
    }
    // Gaussian elimination on (I - A) x = b, pivots taken from the highest
    // index down, no pivoting.
    let idx: Vec<usize> = (0..n).filter(|&s| maybe[s]).collect();
    let mut local = vec![usize::MAX; n];
    for (k, &s) in idx.iter().enumerate() {
        local[s] = k;
    }
    let k_n = idx.len();
    let mut a: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); k_n];
    let mut b: Vec<Rational> = Vec::with_capacity(k_n);
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k_n];
    for (k, &s) in idx.iter().enumerate() {
        *a[k].entry(k).or_insert_with(Rational::zero) += Rational::one();
        for (t, p) in &rows[s] {
            let c = local[*t];
            *a[k].entry(c).or_insert_with(Rational::zero) -= p;
        }
        a[k].retain(|_, v| !v.is_zero());
        for &c in a[k].keys() {
            cols[c].insert(k);
        }
        b.push(rhs[s].clone());
    }
    for k in (0..k_n).rev() {
        let pivot = a[k][&k].clone();
        let pivot_row: Vec<(usize, Rational)> =
            a[k].iter().filter(|(c, _)| **c != k).map(|(c, v)| (*c, v.clone())).collect();
        let users: Vec<usize> = cols[k].iter().copied().filter(|&i| i < k).collect();
        for i in users {
            let factor = a[i].remove(&k).expect("column index in sync") / &pivot;
            cols[k].remove(&i);
            for (c, v) in &pivot_row {
                let e = a[i].entry(*c).or_insert_with(Rational::zero);
                *e -= &factor * v;
                if e.is_zero() {
                    a[i].remove(c);
                    cols[*c].remove(&i);
                } else {
                    cols[*c].insert(i);
                }
            }
            let bk = &factor * &b[k];
            b[i] -= bk;
        }
    }
    let mut y = vec![Rational::zero(); k_n];
    for k in 0..k_n {
        let mut acc = b[k].clone();
        for (c, v) in &a[k] {
            if *c != k {
                acc -= v * &y[*c];
            }
        }
        y[k] = acc / &a[k][&k];
    }
    for (k, &s) in idx.iter().enumerate() {
        x[s] = y[k].clone();
    }
    x
}

impl Mc {
    /// Exact probability of eventually reaching a state marked in `targets`.
    pub fn reach_prob(&self, targets: &[bool]) -> Rational {
        self.reach_probs(targets)[self.initial].clone()
    }

    /// Reachability probabilities from every state.
    pub fn reach_probs(&self, targets: &[bool]) -> Vec<Rational> {
        let n = self.num_states();
        let succ = |s: usize| {
            self.transitions[s]
                .iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(t, _)| *t)
                .collect::<Vec<_>>()
        };
        let reach = backward_reach(n, succ, targets);
        let maybe: Vec<bool> = (0..n).map(|s| reach[s] && !targets[s]).collect();
        let mut rows = vec![Vec::new(); n];
        let mut rhs = vec![Rational::zero(); n];
        for s in (0..n).filter(|&s| maybe[s]) {
            for (t, p) in &self.transitions[s] {
                if targets[*t] {
                    rhs[s] += p;
                } else if maybe[*t] && !p.is_zero() {
                    rows[s].push((*t, p.clone()));
                }
            }
        }
        let mut x = solve_linear(&rows, &rhs, &maybe);
        for s in 0..n {
            if targets[s] {
                x[s] = Rational::one();
            }
        }
        x
    }
}

impl Pmc {
    /// Probability of eventually reaching `targets`, as a rational function,
    /// by eliminating non-initial, non-target states in reverse index order.
    pub fn reach_function(&self, targets: &[bool]) -> Result<RationalFunction> {
        let n = self.num_states();
        let np = self.nparams();
        let init = self.initial();
        if targets[init] {
            return Ok(RationalFunction::one(np));
        }
        let graph = |s: usize| {
            self.successors(s)
                .iter()
                .filter(|(_, f)| !f.is_zero())
                .map(|(t, _)| *t)
                .collect::<Vec<_>>()
        };
        let reach = backward_reach(n, graph, targets);
        if !reach[init] {
            return Ok(RationalFunction::zero(np));
        }
        let mut succ: Vec<BTreeMap<usize, RationalFunction>> = vec![BTreeMap::new(); n];
        let mut pred: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for s in (0..n).filter(|&s| reach[s] && !targets[s]) {
            for (t, f) in self.successors(s) {
                if !reach[*t] || f.is_zero() {
                    continue;
                }
                add_edge(&mut succ[s], *t, f.clone())?;
                pred[*t].insert(s);
            }
        }
        for s in (0..n).rev() {
            if s == init || targets[s] || !reach[s] {
                continue;
            }
            let mut out = std::mem::take(&mut succ[s]);
            let scale = match out.remove(&s) {
                Some(stay) => {
                    let leave = stay.complement();
                    if leave.is_zero() {
                        return Err(Error::SureSelfLoop(s));
                    }
                    Some(leave.recip()?)
                }
                None => None,
            };
            pred[s].remove(&s);
            for (t, _) in &out {
                pred[*t].remove(&s);
            }
            let out: Vec<(usize, RationalFunction)> = match scale {
                Some(c) => out
                    .into_iter()
                    .map(|(t, f)| Ok((t, f.try_mul(&c)?)))
                    .collect::<Result<_>>()?,
                None => out.into_iter().collect(),
            };
            for p in std::mem::take(&mut pred[s]) {
                let a = succ[p].remove(&s).expect("predecessor lists in sync");
                for (t, f) in &out {
                    add_edge(&mut succ[p], *t, a.try_mul(f)?)?;
                    pred[*t].insert(p);
                }
            }
        }
        let mut out = std::mem::take(&mut succ[init]);
        let stay = out.remove(&init);
        let mut num = RationalFunction::zero(np);
        for (t, f) in out {
            debug_assert!(targets[t]);
            num = num.try_add(&f)?;
        }
        match stay {
            None => Ok(num),
            Some(stay) => {
                let leave = stay.complement();
                if leave.is_zero() {
                    return Err(Error::SureSelfLoop(init));
                }
                num.try_div(&leave)
            }
        }
    }
}

fn add_edge(row: &mut BTreeMap<usize, RationalFunction>, t: usize, f: RationalFunction) -> Result<()> {
    match row.get_mut(&t) {
        Some(g) => {
            let sum = g.try_add(&f)?;
            if sum.is_zero() {
                row.remove(&t);
            } else {
                *g = sum;
            }
        }
        None => {
            if !f.is_zero() {
                row.insert(t, f);
            }
        }
    }
    Ok(())
}
