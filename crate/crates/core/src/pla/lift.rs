use num_traits::{One, Zero};

use crate::algebra::{fmt_rat, rat_to_f64, ParamId, Polynomial, Rational, Region};
use crate::error::{Error, Result};
use crate::pmc::{backward_reach, reverse_topological, Mc, Pmc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Min,
    Max,
}

/// Lower and upper bound on a reachability probability over a region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundPair {
    pub lower: Rational,
    pub upper: Rational,
}

type Action = Vec<(usize, Rational)>;

/// Sweeps of the floating-point iteration that seeds policy iteration.
const WARM_SWEEPS: usize = 200;

/// Parameter lifting for one chain and one target set.
///
/// Over a region, every state may pick any corner of the box restricted to
/// the parameters of its own row, independently of the other states. The
/// optimal min/max reachability of that relaxation bounds the true
/// probability at every point of the region. Bounds are exact rationals.
#[derive(Clone, Debug)]
pub struct Lifter {
    initial: usize,
    nparams: usize,
    rows: Vec<Vec<(usize, Polynomial)>>,
    row_params: Vec<Vec<ParamId>>,
    targets: Vec<bool>,
    can_reach: Vec<bool>,
    order: Option<Vec<usize>>,
}

impl Lifter {
    pub fn new(m: &Pmc, targets: Vec<bool>) -> Result<Self> {
        let n = m.num_states();
        assert_eq!(targets.len(), n, "one target flag per state");
        let mut rows = Vec::with_capacity(n);
        let mut row_params = Vec::with_capacity(n);
        for s in 0..n {
            let mut row = Vec::new();
            let mut vars = Vec::new();
            for (t, f) in m.successors(s) {
                let poly = match f.denominator().constant_value() {
                    Some(c) => f.numerator().scale(&(Rational::one() / c)),
                    None => return Err(Error::NotMultiAffine { from: s, to: *t }),
                };
                if !poly.is_multi_affine() {
                    return Err(Error::NotMultiAffine { from: s, to: *t });
                }
                vars.extend(poly.variables());
                row.push((*t, poly));
            }
            vars.sort();
            vars.dedup();
            rows.push(row);
            row_params.push(vars);
        }
        let graph = |s: usize| rows[s].iter().map(|(t, _)| *t).collect::<Vec<_>>();
        let can_reach = backward_reach(n, graph, &targets);
        let inner: Vec<bool> = (0..n).map(|s| can_reach[s] && !targets[s]).collect();
        let order = reverse_topological(n, graph, &inner);
        Ok(Lifter { initial: m.initial(), nparams: m.nparams(), rows, row_params, targets, can_reach, order })
    }

    pub fn targets(&self) -> &[bool] {
        &self.targets
    }

    pub fn bounds(&self, r: &Region) -> Result<BoundPair> {
        let actions = self.actions(r)?;
        Ok(BoundPair {
            lower: self.solve(&actions, Objective::Min),
            upper: self.solve(&actions, Objective::Max),
        })
    }

    pub fn bound(&self, r: &Region, obj: Objective) -> Result<Rational> {
        Ok(self.solve(&self.actions(r)?, obj))
    }

    /// Corner distributions of every state that can still reach the target.
    fn actions(&self, r: &Region) -> Result<Vec<Vec<Action>>> {
        if r.dim() != self.nparams {
            return Err(Error::ParameterMismatch { left: self.nparams, right: r.dim() });
        }
        let base: Vec<Rational> = r.intervals().iter().map(|iv| iv.lo.clone()).collect();
        let mut out = Vec::with_capacity(self.rows.len());
        for s in 0..self.rows.len() {
            if !self.can_reach[s] || self.targets[s] {
                out.push(Vec::new());
                continue;
            }
            let mut acts: Vec<Action> = Vec::new();
            for corner in r.vertices(&self.row_params[s])? {
                let mut point = base.clone();
                for (id, v) in corner {
                    point[id.0] = v;
                }
                let mut sum = Rational::zero();
                let mut act = Vec::with_capacity(self.rows[s].len());
                for (t, f) in &self.rows[s] {
                    let x = f.eval(&point);
                    if x < Rational::zero() || x > Rational::one() {
                        return Err(Error::RegionNotWellFormed(format!(
                            "transition {s} -> {t} evaluates to {} at a corner",
                            fmt_rat(&x)
                        )));
                    }
                    sum += &x;
                    act.push((*t, x));
                }
                if !sum.is_one() {
                    return Err(Error::RegionNotWellFormed(format!(
                        "transitions of state {s} sum to {} at a corner",
                        fmt_rat(&sum)
                    )));
                }
                if !acts.contains(&act) {
                    acts.push(act);
                }
            }
            out.push(acts);
        }
        Ok(out)
    }

    fn solve(&self, actions: &[Vec<Action>], obj: Objective) -> Rational {
        let n = self.rows.len();
        if self.targets[self.initial] {
            return Rational::one();
        }
        if !self.can_reach[self.initial] {
            return Rational::zero();
        }
        let zero = match obj {
            Objective::Max => self.can_reach.iter().map(|c| !c).collect(),
            Objective::Min => self.avoidable(actions),
        };
        let maybe: Vec<bool> = (0..n).map(|s| !self.targets[s] && !zero[s]).collect();
        if !maybe[self.initial] {
            return Rational::zero();
        }
        match &self.order {
            Some(order) => self.backward(actions, &maybe, order, obj),
            None => self.policy_iteration(actions, &maybe, obj),
        }
    }

    /// States with a choice of corners that avoids the target surely.
    fn avoidable(&self, actions: &[Vec<Action>]) -> Vec<bool> {
        let n = self.rows.len();
        let mut z: Vec<bool> = self.targets.iter().map(|t| !t).collect();
        loop {
            let mut changed = false;
            for s in 0..n {
                if z[s] && self.can_reach[s] {
                    let keep = actions[s]
                        .iter()
                        .any(|a| a.iter().all(|(t, p)| p.is_zero() || z[*t]));
                    if !keep {
                        z[s] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                return z;
            }
        }
    }

    fn value_init(&self, maybe: &[bool]) -> Vec<Rational> {
        (0..maybe.len())
            .map(|s| if self.targets[s] { Rational::one() } else { Rational::zero() })
            .collect()
    }

    fn backward(&self, actions: &[Vec<Action>], maybe: &[bool], order: &[usize], obj: Objective) -> Rational {
        let mut x = self.value_init(maybe);
        for &s in order {
            if !maybe[s] {
                continue;
            }
            let mut best: Option<Rational> = None;
            for a in &actions[s] {
                let mut acc = Rational::zero();
                let mut stay = Rational::zero();
                for (t, p) in a {
                    if *t == s {
                        stay += p;
                    } else {
                        acc += p * &x[*t];
                    }
                }
                let v = if stay.is_one() { Rational::zero() } else { acc / (Rational::one() - stay) };
                if best.as_ref().map_or(true, |b| better(obj, &v, b)) {
                    best = Some(v);
                }
            }
            x[s] = best.unwrap_or_else(Rational::zero);
        }
        x[self.initial].clone()
    }

    fn policy_iteration(&self, actions: &[Vec<Action>], maybe: &[bool], obj: Objective) -> Rational {
        let n = self.rows.len();
        let mut policy = self.warm_start(actions, maybe, obj);
        loop {
            let transitions = (0..n)
                .map(|s| if maybe[s] { actions[s][policy[s]].clone() } else { vec![(s, Rational::one())] })
                .collect();
            let mc = Mc { initial: self.initial, transitions };
            let x = mc.reach_probs(&self.targets);
            let mut changed = false;
            for s in (0..n).filter(|&s| maybe[s]) {
                let mut best = x[s].clone();
                let mut choice = policy[s];
                for (i, a) in actions[s].iter().enumerate() {
                    let q: Rational = a.iter().map(|(t, p)| p * &x[*t]).sum();
                    if better(obj, &q, &best) {
                        best = q;
                        choice = i;
                    }
                }
                if choice != policy[s] {
                    policy[s] = choice;
                    changed = true;
                }
            }
            if !changed {
                return x[self.initial].clone();
            }
        }
    }

    /// Greedy policy of a floating-point value iteration.
    fn warm_start(&self, actions: &[Vec<Action>], maybe: &[bool], obj: Objective) -> Vec<usize> {
        let n = self.rows.len();
        let fa: Vec<Vec<Vec<(usize, f64)>>> = actions
            .iter()
            .map(|acts| acts.iter().map(|a| a.iter().map(|(t, p)| (*t, rat_to_f64(p))).collect()).collect())
            .collect();
        let mut x: Vec<f64> = (0..n).map(|s| if self.targets[s] { 1.0 } else { 0.0 }).collect();
        let q = |x: &[f64], a: &[(usize, f64)]| a.iter().map(|(t, p)| p * x[*t]).sum::<f64>();
        let pick = |v: f64, b: f64| match obj {
            Objective::Max => v > b,
            Objective::Min => v < b,
        };
        for _ in 0..WARM_SWEEPS {
            let mut delta: f64 = 0.0;
            for s in (0..n).filter(|&s| maybe[s]) {
                let mut best = q(&x, &fa[s][0]);
                for a in &fa[s][1..] {
                    let v = q(&x, a);
                    if pick(v, best) {
                        best = v;
                    }
                }
                delta = delta.max((best - x[s]).abs());
                x[s] = best;
            }
            if delta < 1e-12 {
                break;
            }
        }
        (0..n)
            .map(|s| {
                if !maybe[s] {
                    return 0;
                }
                let mut choice = 0;
                let mut best = q(&x, &fa[s][0]);
                for (i, a) in fa[s].iter().enumerate().skip(1) {
                    let v = q(&x, a);
                    if pick(v, best) {
                        best = v;
                        choice = i;
                    }
                }
                choice
            })
            .collect()
    }
}

fn better(obj: Objective, v: &Rational, than: &Rational) -> bool {
    match obj {
        Objective::Max => v > than,
        Objective::Min => v < than,
    }
}

/// One bound of `P(◇ targets)` over `r`.
pub fn lift_bounds(m: &Pmc, r: &Region, targets: &[bool], obj: Objective) -> Result<Rational> {
    Lifter::new(m, targets.to_vec())?.bound(r, obj)
}
