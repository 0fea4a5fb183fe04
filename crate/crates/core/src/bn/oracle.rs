use num_traits::{One, Zero};

use crate::algebra::{fmt_rat, Instantiation, Rational};
use crate::error::{Error, Result};

use super::model::{Pbn, VarId, Variable};
use super::query::Assignment;

/// Largest joint state space the enumeration routines will walk.
pub const MAX_JOINT_OUTCOMES: u128 = 1 << 20;

/// Parameter-free Bayesian network with exact rational CPTs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bn {
    variables: Vec<Variable>,
    parents: Vec<Vec<VarId>>,
    rows: Vec<Vec<Vec<Rational>>>,
    order: Vec<VarId>,
}

impl Pbn {
    /// Evaluates every CPT entry at `u`. Fails if some entry leaves [0, 1].
    pub fn instantiate(&self, u: &Instantiation) -> Result<Bn> {
        if u.len() != self.nparams() {
            return Err(Error::ParameterMismatch {
                left: self.nparams(),
                right: u.len(),
            });
        }
        let order = self.topological_order()?;
        let zero = Rational::zero();
        let one = Rational::one();
        let mut rows = Vec::with_capacity(self.num_vars());
        for v in self.var_ids() {
            let mut table = Vec::with_capacity(self.cpt(v).rows.len());
            for (r, row) in self.cpt(v).rows.iter().enumerate() {
                let vals: Vec<Rational> = row.iter().map(|e| e.eval(u.values())).collect();
                if let Some((d, x)) = vals.iter().enumerate().find(|(_, x)| **x < zero || **x > one) {
                    return Err(Error::NotWellFormed(format!(
                        "P({}={} | {}) = {}",
                        self.variable(v).name,
                        self.variable(v).values[d],
                        self.row_label(v, r),
                        fmt_rat(x)
                    )));
                }
                table.push(vals);
            }
            rows.push(table);
        }
        Ok(Bn {
            variables: self.variables().to_vec(),
            parents: self.var_ids().map(|v| self.parents(v).to_vec()).collect(),
            rows,
            order,
        })
    }
}

impl Bn {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn parents(&self, v: VarId) -> &[VarId] {
        &self.parents[v.0]
    }

    /// CPT rows of `v`, same layout as the parametric source.
    pub fn table(&self, v: VarId) -> &[Vec<Rational>] {
        &self.rows[v.0]
    }

    pub fn entry(&self, v: VarId, values: &[usize]) -> &Rational {
        let mut idx = 0;
        for p in &self.parents[v.0] {
            idx = idx * self.variables[p.0].arity() + values[p.0];
        }
        &self.rows[v.0][idx][values[v.0]]
    }

    /// Probability of one full joint outcome (indexed by variable).
    pub fn joint_probability(&self, values: &[usize]) -> Rational {
        self.order
            .iter()
            .fold(Rational::one(), |acc, &v| acc * self.entry(v, values))
    }

    pub fn joint_size(&self) -> u128 {
        self.variables
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.arity() as u128))
    }

    fn guard(&self) -> Result<()> {
        let size = self.joint_size();
        if size > MAX_JOINT_OUTCOMES {
            Err(Error::StateSpaceTooLarge(size))
        } else {
            Ok(())
        }
    }

    /// Visits every joint outcome with nonzero probability, depth-first in
    /// topological order. Branches whose prefix has probability zero are cut.
    pub fn for_each_outcome(&self, mut visit: impl FnMut(&[usize], &Rational)) -> Result<()> {
        self.guard()?;
        let mut values = vec![0; self.variables.len()];
        self.walk(0, &mut values, Rational::one(), &mut visit);
        Ok(())
    }

    fn walk(
        &self,
        depth: usize,
        values: &mut Vec<usize>,
        mass: Rational,
        visit: &mut impl FnMut(&[usize], &Rational),
    ) {
        if depth == self.order.len() {
            visit(values, &mass);
            return;
        }
        let v = self.order[depth];
        for d in 0..self.variables[v.0].arity() {
            values[v.0] = d;
            let pr = self.entry(v, values);
            if pr.is_zero() {
                continue;
            }
            self.walk(depth + 1, values, &mass * pr, visit);
        }
        values[v.0] = 0;
    }

    /// All joint probabilities, indexed mixed-radix over the variables in
    /// declaration order (last variable fastest). Zero outcomes included.
    pub fn joint_distribution(&self) -> Result<Vec<Rational>> {
        self.guard()?;
        let mut out = vec![Rational::zero(); self.joint_size() as usize];
        let arities: Vec<usize> = self.variables.iter().map(Variable::arity).collect();
        self.for_each_outcome(|vals, pr| {
            let idx = vals
                .iter()
                .zip(&arities)
                .fold(0usize, |acc, (&d, &a)| acc * a + d);
            out[idx] = pr.clone();
        })?;
        Ok(out)
    }

    /// Marginal probability of an assignment.
    pub fn probability(&self, a: &Assignment) -> Result<Rational> {
        let mut total = Rational::zero();
        self.for_each_outcome(|vals, pr| {
            if a.holds(vals) {
                total += pr;
            }
        })?;
        Ok(total)
    }

    /// `Pr(target | given)` by full enumeration.
    pub fn joint_oracle(&self, target: &Assignment, given: &Assignment) -> Result<Rational> {
        let mut both = Rational::zero();
        let mut ev = Rational::zero();
        self.for_each_outcome(|vals, pr| {
            if given.holds(vals) {
                ev += pr;
                if target.holds(vals) {
                    both += pr;
                }
            }
        })?;
        if ev.is_zero() {
            return Err(Error::ZeroProbabilityEvidence);
        }
        Ok(both / ev)
    }
}
