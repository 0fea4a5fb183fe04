use std::collections::HashSet;
use std::fmt;

use crate::algebra::Polynomial;
use crate::error::{Error, Result};

use super::model::{Pbn, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateVariable(String),
    SmallDomain { var: String },
    DuplicateValue { var: String, value: String },
    Cycle(Vec<String>),
    RowSum { var: String, row: usize, parents: String, sum: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVariable(v) => write!(f, "variable `{v}` declared twice"),
            Violation::SmallDomain { var } => write!(f, "variable `{var}` has fewer than two values"),
            Violation::DuplicateValue { var, value } => {
                write!(f, "variable `{var}` lists value `{value}` twice")
            }
            Violation::Cycle(vars) => write!(f, "cycle through {}", vars.join(", ")),
            Violation::RowSum { var, row, parents, sum } => {
                write!(f, "CPT of `{var}`, row {row} {parents}: entries sum to {sum}, not 1")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Turns the first violation into an error.
    pub fn into_result(self) -> Result<()> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(Violation::Cycle(vars)) => Err(Error::Cycle(vars)),
            Some(v) => Err(Error::InvalidModel(v.to_string())),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Pbn {
    /// Collects every structural and row-sum violation.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut seen = HashSet::new();
        for v in self.variables() {
            if !seen.insert(v.name.as_str()) {
                violations.push(Violation::DuplicateVariable(v.name.clone()));
            }
            if v.arity() < 2 {
                violations.push(Violation::SmallDomain { var: v.name.clone() });
            }
            let mut labels = HashSet::new();
            for d in &v.values {
                if !labels.insert(d.as_str()) {
                    violations.push(Violation::DuplicateValue {
                        var: v.name.clone(),
                        value: d.clone(),
                    });
                }
            }
        }
        if let Err(Error::Cycle(vars)) = self.topological_order() {
            violations.push(Violation::Cycle(vars));
        }
        let names = self.params().names();
        let one = Polynomial::one(self.nparams());
        for v in self.var_ids() {
            for (r, row) in self.cpt(v).rows.iter().enumerate() {
                let sum = row
                    .iter()
                    .fold(Polynomial::zero(self.nparams()), |acc, e| &acc + e);
                if sum != one {
                    violations.push(Violation::RowSum {
                        var: self.variable(v).name.clone(),
                        row: r,
                        parents: self.row_label(v, r),
                        sum: sum.render(&names),
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Parents before children; among ready variables the earliest declared
    /// comes first.
    pub fn topological_order(&self) -> Result<Vec<VarId>> {
        let n = self.num_vars();
        let mut indegree: Vec<usize> = self.var_ids().map(|v| self.parents(v).len()).collect();
        let children: Vec<Vec<VarId>> = self.var_ids().map(|v| self.children(v)).collect();
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let Some(next) = (0..n).find(|&i| !done[i] && indegree[i] == 0) else {
                let rest = (0..n)
                    .filter(|&i| !done[i])
                    .map(|i| self.variables()[i].name.clone())
                    .collect();
                return Err(Error::Cycle(rest));
            };
            done[next] = true;
            order.push(VarId(next));
            for c in &children[next] {
                // a parent listed twice still counts once per listing
                indegree[c.0] -= self.parents(*c).iter().filter(|&&p| p.0 == next).count();
            }
        }
        Ok(order)
    }

    /// Confirms `order` is a permutation of the variables with parents first.
    pub fn check_order(&self, order: &[VarId]) -> Result<()> {
        let mut pos = vec![usize::MAX; self.num_vars()];
        for (i, v) in order.iter().enumerate() {
            if v.0 >= self.num_vars() || pos[v.0] != usize::MAX {
                return Err(Error::NotTopological("not a permutation of the variables".into()));
            }
            pos[v.0] = i;
        }
        if order.len() != self.num_vars() {
            return Err(Error::NotTopological("not a permutation of the variables".into()));
        }
        for (p, c) in self.edges() {
            if pos[p.0] >= pos[c.0] {
                return Err(Error::NotTopological(format!(
                    "`{}` comes after its child `{}`",
                    self.variable(p).name,
                    self.variable(c).name
                )));
            }
        }
        Ok(())
    }
}
