use std::sync::Arc;

use crate::algebra::{ParamId, Parameter, ParameterSet, Polynomial, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub values: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, values: &[&str]) -> Self {
        Variable {
            name: name.into(),
            values: values.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.values.len()
    }

    pub fn value_index(&self, label: &str) -> Option<usize> {
        self.values.iter().position(|v| v == label)
    }
}

/// Parametric CPT of one variable. Rows are indexed row-major over the
/// parents in declared order (last parent varies fastest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cpt {
    pub parents: Vec<VarId>,
    pub rows: Vec<Vec<Polynomial>>,
}

/// Parametric Bayesian network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pbn {
    name: String,
    params: Arc<ParameterSet>,
    variables: Vec<Variable>,
    cpts: Vec<Cpt>,
}

impl Pbn {
    /// Checks the shape of every CPT against the variable domains. Semantic
    /// conditions (acyclicity, row sums) are left to [`Pbn::validate`].
    pub fn new(
        name: impl Into<String>,
        params: ParameterSet,
        variables: Vec<Variable>,
        cpts: Vec<Cpt>,
    ) -> Result<Self> {
        if cpts.len() != variables.len() {
            return Err(Error::InvalidModel(format!(
                "{} variables but {} CPTs",
                variables.len(),
                cpts.len()
            )));
        }
        for (v, cpt) in variables.iter().zip(&cpts) {
            let mut rows = 1usize;
            for p in &cpt.parents {
                let pv = variables.get(p.0).ok_or_else(|| {
                    Error::InvalidModel(format!("CPT of `{}` names an unknown parent", v.name))
                })?;
                rows = rows.saturating_mul(pv.arity());
            }
            if cpt.rows.len() != rows {
                return Err(Error::InvalidModel(format!(
                    "CPT of `{}` has {} rows, expected {}",
                    v.name,
                    cpt.rows.len(),
                    rows
                )));
            }
            for row in &cpt.rows {
                if row.len() != v.arity() {
                    return Err(Error::InvalidModel(format!(
                        "CPT row of `{}` has {} entries, expected {}",
                        v.name,
                        row.len(),
                        v.arity()
                    )));
                }
                if let Some(e) = row.iter().find(|e| e.nvars() != params.len()) {
                    return Err(Error::ParameterMismatch {
                        left: params.len(),
                        right: e.nvars(),
                    });
                }
            }
        }
        Ok(Pbn {
            name: name.into(),
            params: Arc::new(params),
            variables,
            cpts,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn params_arc(&self) -> Arc<ParameterSet> {
        Arc::clone(&self.params)
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, v: VarId) -> &Variable {
        &self.variables[v.0]
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.variables.len()).map(VarId)
    }

    pub fn cpt(&self, v: VarId) -> &Cpt {
        &self.cpts[v.0]
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn parents(&self, v: VarId) -> &[VarId] {
        &self.cpts[v.0].parents
    }

    pub fn children(&self, v: VarId) -> Vec<VarId> {
        self.var_ids()
            .filter(|&c| self.parents(c).contains(&v))
            .collect()
    }

    /// Parent -> child pairs, ordered by child then parent position.
    pub fn edges(&self) -> Vec<(VarId, VarId)> {
        self.var_ids()
            .flat_map(|c| self.parents(c).iter().map(move |&p| (p, c)))
            .collect()
    }

    pub fn find_var(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name == name).map(VarId)
    }

    /// Row index of `v`'s CPT for the parent values produced by `value_of`.
    pub fn row_index(&self, v: VarId, mut value_of: impl FnMut(VarId) -> usize) -> usize {
        let mut idx = 0;
        for &p in self.parents(v) {
            idx = idx * self.variable(p).arity() + value_of(p);
        }
        idx
    }

    /// Parent values of row `row`, in parent order.
    pub fn row_valuation(&self, v: VarId, mut row: usize) -> Vec<usize> {
        let parents = self.parents(v);
        let mut vals = vec![0; parents.len()];
        for (k, &p) in parents.iter().enumerate().rev() {
            let a = self.variable(p).arity();
            vals[k] = row % a;
            row /= a;
        }
        vals
    }

    /// Human-readable parent valuation of a row, e.g. `(yes, neg)`.
    pub fn row_label(&self, v: VarId, row: usize) -> String {
        let vals = self.row_valuation(v, row);
        let labels: Vec<&str> = self
            .parents(v)
            .iter()
            .zip(&vals)
            .map(|(&p, &d)| self.variable(p).values[d].as_str())
            .collect();
        format!("({})", labels.join(", "))
    }

    /// Replaces the parameters in `fixed` by constants, producing a pBN over
    /// the remaining parameters (declaration order preserved).
    pub fn fix_parameters(&self, fixed: &[(ParamId, Rational)]) -> Result<Pbn> {
        let mut keep = vec![None; self.params.len()];
        let mut remaining = Vec::new();
        for id in self.params.ids() {
            let p = self.params.get(id);
            match fixed.iter().find(|(f, _)| *f == id) {
                Some((_, v)) => {
                    if v < &p.lower || v > &p.upper {
                        return Err(Error::OutOfBounds {
                            name: p.name.clone(),
                            value: crate::algebra::fmt_rat(v),
                            lower: crate::algebra::fmt_rat(&p.lower),
                            upper: crate::algebra::fmt_rat(&p.upper),
                        });
                    }
                }
                None => {
                    keep[id.0] = Some(remaining.len());
                    remaining.push(Parameter::new(p.name.clone(), p.lower.clone(), p.upper.clone())?);
                }
            }
        }
        let n = remaining.len();
        let cpts = self
            .cpts
            .iter()
            .map(|cpt| Cpt {
                parents: cpt.parents.clone(),
                rows: cpt
                    .rows
                    .iter()
                    .map(|row| row.iter().map(|e| e.substitute(fixed, &keep, n)).collect())
                    .collect(),
            })
            .collect();
        Pbn::new(
            self.name.clone(),
            ParameterSet::new(remaining)?,
            self.variables.clone(),
            cpts,
        )
    }

    /// Product of domain sizes, saturating.
    pub fn joint_size(&self) -> u128 {
        self.variables
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.arity() as u128))
    }
}
