use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{fmt_rat, Instantiation, ParameterSet, Rational, RationalFunction};
use crate::bn::{Assignment, Variable};
use crate::error::{Error, Result};

/// A pMC state: its level and the value of every variable it remembers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PmcState {
    pub level: usize,
    pub valuation: Vec<Option<usize>>,
}

/// Parametric Markov chain whose states remember partial valuations of the
/// network variables they were built from.
#[derive(Clone, Debug)]
pub struct Pmc {
    params: Arc<ParameterSet>,
    variables: Vec<Variable>,
    states: Vec<PmcState>,
    transitions: Vec<Vec<(usize, RationalFunction)>>,
    initial: usize,
    final_level: usize,
}

impl Pmc {
    pub fn new(
        params: Arc<ParameterSet>,
        variables: Vec<Variable>,
        states: Vec<PmcState>,
        transitions: Vec<Vec<(usize, RationalFunction)>>,
        initial: usize,
        final_level: usize,
    ) -> Result<Self> {
        if states.len() != transitions.len() {
            return Err(Error::InvalidModel(format!(
                "{} states but {} transition rows",
                states.len(),
                transitions.len()
            )));
        }
        if initial >= states.len() {
            return Err(Error::InvalidModel("initial state out of range".into()));
        }
        for (s, row) in transitions.iter().enumerate() {
            if states[s].valuation.len() != variables.len() {
                return Err(Error::InvalidModel(format!("state {s} has a malformed valuation")));
            }
            for (t, f) in row {
                if *t >= states.len() {
                    return Err(Error::InvalidModel(format!("transition {s} -> {t} leaves the chain")));
                }
                if f.nvars() != params.len() {
                    return Err(Error::ParameterMismatch { left: params.len(), right: f.nvars() });
                }
            }
        }
        Ok(Pmc { params, variables, states, transitions, initial, final_level })
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

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn state(&self, s: usize) -> &PmcState {
        &self.states[s]
    }

    pub fn states(&self) -> &[PmcState] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn final_level(&self) -> usize {
        self.final_level
    }

    pub fn is_final(&self, s: usize) -> bool {
        self.states[s].level == self.final_level
    }

    pub fn successors(&self, s: usize) -> &[(usize, RationalFunction)] {
        &self.transitions[s]
    }

    pub fn transitions(&self) -> &[Vec<(usize, RationalFunction)>] {
        &self.transitions
    }

    /// States whose outgoing functions do not add up to the constant one.
    pub fn non_stochastic_states(&self) -> Vec<usize> {
        let n = self.nparams();
        (0..self.num_states())
            .filter(|&s| {
                let sum = self.transitions[s]
                    .iter()
                    .try_fold(RationalFunction::zero(n), |acc, (_, f)| acc.try_add(f));
                !matches!(sum, Ok(f) if f.is_one())
            })
            .collect()
    }

    /// Short description of a state, e.g. `[Pregnancy=yes, UrineTest=neg]`.
    pub fn state_labels(&self, s: usize) -> Vec<String> {
        let st = &self.states[s];
        let mut out = Vec::new();
        if s == self.initial {
            out.push("init".to_string());
        }
        if self.is_final(s) {
            out.push("final".to_string());
        }
        out.push(format!("level={}", st.level));
        for (v, d) in st.valuation.iter().enumerate() {
            if let Some(d) = d {
                out.push(format!("{}={}", self.variables[v].name, self.variables[v].values[*d]));
            }
        }
        out
    }

    pub fn select(&self, pred: &StatePredicate) -> Vec<bool> {
        (0..self.num_states()).map(|s| pred.holds(self, s)).collect()
    }
}

/// Set of states described by the variable values they remember.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatePredicate {
    True,
    False,
    Final,
    /// Some listed variable is known and has a different value.
    Violates(Assignment),
    /// Every listed variable is known and has the listed value.
    Satisfies(Assignment),
    Not(Box<StatePredicate>),
    Any(Vec<StatePredicate>),
    All(Vec<StatePredicate>),
}

impl StatePredicate {
    pub fn holds(&self, m: &Pmc, s: usize) -> bool {
        let val = &m.state(s).valuation;
        match self {
            StatePredicate::True => true,
            StatePredicate::False => false,
            StatePredicate::Final => m.is_final(s),
            StatePredicate::Violates(a) => a
                .pairs()
                .iter()
                .any(|&(v, d)| matches!(val[v.0], Some(x) if x != d)),
            StatePredicate::Satisfies(a) => a.pairs().iter().all(|&(v, d)| val[v.0] == Some(d)),
            StatePredicate::Not(p) => !p.holds(m, s),
            StatePredicate::Any(ps) => ps.iter().any(|p| p.holds(m, s)),
            StatePredicate::All(ps) => ps.iter().all(|p| p.holds(m, s)),
        }
    }
}

/// Markov chain with exact rational transition probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mc {
    pub initial: usize,
    pub transitions: Vec<Vec<(usize, Rational)>>,
}

impl Mc {
    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }
}

impl Pmc {
    /// Evaluates every transition at `u`. Fails on poles, on probabilities
    /// outside [0, 1] and on rows that do not sum to one.
    pub fn instantiate(&self, u: &Instantiation) -> Result<Mc> {
        if u.len() != self.nparams() {
            return Err(Error::ParameterMismatch { left: self.nparams(), right: u.len() });
        }
        let zero = Rational::zero();
        let one = Rational::one();
        let mut transitions = Vec::with_capacity(self.num_states());
        for (s, row) in self.transitions.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            let mut sum = Rational::zero();
            for (t, f) in row {
                let x = f.eval(u.values()).map_err(|_| {
                    Error::NotWellFormed(format!("transition {s} -> {t} has a pole"))
                })?;
                if x < zero || x > one {
                    return Err(Error::NotWellFormed(format!(
                        "transition {s} -> {t} evaluates to {}",
                        fmt_rat(&x)
                    )));
                }
                sum += &x;
                out.push((*t, x));
            }
            if sum != one {
                return Err(Error::NotWellFormed(format!(
                    "transitions of state {s} sum to {}",
                    fmt_rat(&sum)
                )));
            }
            transitions.push(out);
        }
        Ok(Mc { initial: self.initial, transitions })
    }
}
