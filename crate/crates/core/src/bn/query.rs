use std::fmt;

use crate::algebra::{fmt_rat, rat_to_f64, Rational};
use crate::error::{Error, Result};

use super::model::{Pbn, VarId};

/// Conjunction of `variable = value` tests, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    pairs: Vec<(VarId, usize)>,
}

impl Assignment {
    pub fn new(mut pairs: Vec<(VarId, usize)>) -> Result<Self> {
        pairs.sort();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidQuery(format!(
                    "variable #{} assigned twice",
                    w[0].0 .0
                )));
            }
        }
        Ok(Assignment { pairs })
    }

    pub fn empty() -> Self {
        Assignment::default()
    }

    /// Looks variables and values up by name.
    pub fn from_names(b: &Pbn, pairs: &[(&str, &str)]) -> Result<Self> {
        let resolved = pairs
            .iter()
            .map(|(var, val)| {
                let v = b
                    .find_var(var)
                    .ok_or_else(|| Error::InvalidQuery(format!("unknown variable `{var}`")))?;
                let d = b.variable(v).value_index(val).ok_or_else(|| {
                    Error::InvalidQuery(format!("`{val}` is not a value of `{var}`"))
                })?;
                Ok((v, d))
            })
            .collect::<Result<Vec<_>>>()?;
        Assignment::new(resolved)
    }

    pub fn pairs(&self) -> &[(VarId, usize)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn value_of(&self, v: VarId) -> Option<usize> {
        self.pairs.iter().find(|(w, _)| *w == v).map(|&(_, d)| d)
    }

    pub fn variables(&self) -> Vec<VarId> {
        self.pairs.iter().map(|&(v, _)| v).collect()
    }

    /// Does the full joint outcome `values` (indexed by variable) satisfy this?
    pub fn holds(&self, values: &[usize]) -> bool {
        self.pairs.iter().all(|&(v, d)| values[v.0] == d)
    }

    pub fn render(&self, b: &Pbn) -> String {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|&(v, d)| format!("{}={}", b.variable(v).name, b.variable(v).values[d]))
            .collect();
        parts.join(", ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QueryKind {
    Probability,
    Ratio,
    Difference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparison {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Comparison::Lt => lhs < rhs,
            Comparison::Le => lhs <= rhs,
            Comparison::Gt => lhs > rhs,
            Comparison::Ge => lhs >= rhs,
        }
    }

    pub fn holds_f64(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Comparison::Lt => lhs < rhs,
            Comparison::Le => lhs <= rhs,
            Comparison::Gt => lhs > rhs,
            Comparison::Ge => lhs >= rhs,
        }
    }

    pub fn is_upper_bound(self) -> bool {
        matches!(self, Comparison::Lt | Comparison::Le)
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Comparison::Lt | Comparison::Gt)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Gt => ">",
            Comparison::Ge => ">=",
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Which assignment the alternative of a ratio/difference query replaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Hypothesis,
    Evidence,
}

/// A threshold constraint over a conditional probability, or over the
/// ratio / difference of two conditionals.
///
/// With the alternative on the hypothesis side the second conditional is
/// `P(alt | ev)`, on the evidence side it is `P(hyp | alt)`.
/// Ratio: `first ∼ q · second`. Difference: `first - second ∼ q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub hypothesis: Assignment,
    pub evidence: Assignment,
    pub alternative: Option<Assignment>,
    pub side: Side,
    pub kind: QueryKind,
    pub comparison: Comparison,
    pub threshold: Rational,
}

impl Query {
    pub fn probability(
        hypothesis: Assignment,
        evidence: Assignment,
        comparison: Comparison,
        threshold: Rational,
    ) -> Result<Self> {
        Query::build(
            hypothesis,
            evidence,
            None,
            Side::Hypothesis,
            QueryKind::Probability,
            comparison,
            threshold,
        )
    }

    /// `P(hyp | ev) ∼ q · P(alt | ev)`.
    pub fn ratio(
        hypothesis: Assignment,
        alternative: Assignment,
        evidence: Assignment,
        comparison: Comparison,
        threshold: Rational,
    ) -> Result<Self> {
        Query::compare(QueryKind::Ratio, Side::Hypothesis, hypothesis, alternative, evidence, comparison, threshold)
    }

    /// `P(hyp | ev) - P(alt | ev) ∼ q`.
    pub fn difference(
        hypothesis: Assignment,
        alternative: Assignment,
        evidence: Assignment,
        comparison: Comparison,
        threshold: Rational,
    ) -> Result<Self> {
        Query::compare(
            QueryKind::Difference,
            Side::Hypothesis,
            hypothesis,
            alternative,
            evidence,
            comparison,
            threshold,
        )
    }

    /// Ratio or difference query with the alternative on either side.
    pub fn compare(
        kind: QueryKind,
        side: Side,
        hypothesis: Assignment,
        alternative: Assignment,
        evidence: Assignment,
        comparison: Comparison,
        threshold: Rational,
    ) -> Result<Self> {
        if kind == QueryKind::Probability {
            return Err(Error::InvalidQuery("probability queries have no alternative".into()));
        }
        Query::build(hypothesis, evidence, Some(alternative), side, kind, comparison, threshold)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        hypothesis: Assignment,
        evidence: Assignment,
        alternative: Option<Assignment>,
        side: Side,
        kind: QueryKind,
        comparison: Comparison,
        threshold: Rational,
    ) -> Result<Self> {
        if hypothesis.is_empty() {
            return Err(Error::InvalidQuery("hypothesis is empty".into()));
        }
        if let Some(alt) = &alternative {
            let (vars, what) = match side {
                Side::Hypothesis => (hypothesis.variables(), "hypothesis"),
                Side::Evidence => (evidence.variables(), "evidence"),
            };
            if vars.is_empty() || alt.variables() != vars {
                return Err(Error::InvalidQuery(format!(
                    "alternative must assign the same variables as the {what}"
                )));
            }
        }
        Ok(Query {
            hypothesis,
            evidence,
            alternative,
            side,
            kind,
            comparison,
            threshold,
        })
    }

    /// The conditionals the constraint compares, as (hypothesis, evidence)
    /// pairs: the first always, the second for ratio/difference queries.
    pub fn conditionals(&self) -> Vec<(&Assignment, &Assignment)> {
        let mut out = vec![(&self.hypothesis, &self.evidence)];
        if let Some(alt) = &self.alternative {
            out.push(match self.side {
                Side::Hypothesis => (alt, &self.evidence),
                Side::Evidence => (&self.hypothesis, alt),
            });
        }
        out
    }

    /// Same query with another comparison and threshold.
    pub fn with_constraint(&self, comparison: Comparison, threshold: Rational) -> Query {
        Query {
            comparison,
            threshold,
            ..self.clone()
        }
    }

    /// Checks the constraint on exact values of the conditionals `P(hyp|ev)`
    /// and, for ratio/difference queries, `P(alt|ev)`.
    pub fn holds(&self, hyp: &Rational, alt: Option<&Rational>) -> bool {
        match self.kind {
            QueryKind::Probability => self.comparison.holds(hyp, &self.threshold),
            QueryKind::Ratio => {
                let alt = alt.expect("ratio query needs the alternative value");
                self.comparison.holds(hyp, &(&self.threshold * alt))
            }
            QueryKind::Difference => {
                let alt = alt.expect("difference query needs the alternative value");
                self.comparison.holds(&(hyp - alt), &self.threshold)
            }
        }
    }

    /// Signed slack of the constraint: positive when satisfied with room.
    pub fn margin_f64(&self, hyp: f64, alt: Option<f64>) -> f64 {
        let q = rat_to_f64(&self.threshold);
        let lhs_minus_rhs = match self.kind {
            QueryKind::Probability => hyp - q,
            QueryKind::Ratio => hyp - q * alt.unwrap_or(0.0),
            QueryKind::Difference => hyp - alt.unwrap_or(0.0) - q,
        };
        if self.comparison.is_upper_bound() {
            -lhs_minus_rhs
        } else {
            lhs_minus_rhs
        }
    }

    /// Text form accepted by the query parser.
    pub fn render(&self, b: &Pbn) -> String {
        let given = if self.evidence.is_empty() {
            String::new()
        } else {
            format!(" | {}", self.evidence.render(b))
        };
        let inner = match (&self.alternative, self.kind, self.side) {
            (None, _, _) => format!("{}{given}", self.hypothesis.render(b)),
            (Some(alt), kind, Side::Hypothesis) => format!(
                "{} {} {}{given}",
                self.hypothesis.render(b),
                if kind == QueryKind::Ratio { ":" } else { "-" },
                alt.render(b)
            ),
            (Some(alt), kind, Side::Evidence) => format!(
                "{}{given} {} {}",
                self.hypothesis.render(b),
                if kind == QueryKind::Ratio { ":" } else { "-" },
                alt.render(b)
            ),
        };
        let head = match self.kind {
            QueryKind::Probability => "P",
            QueryKind::Ratio => "RATIO",
            QueryKind::Difference => "DIFF",
        };
        format!("{head}({inner}) {} {}", self.comparison, fmt_rat(&self.threshold))
    }
}
