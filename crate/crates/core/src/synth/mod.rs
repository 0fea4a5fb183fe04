//! Feasibility search, parameter tuning and distances between instantiated
//! networks.

mod distance;
mod pso;
mod tuning;

pub use distance::cd_distance;
pub use pso::{feasibility_pso, PsoConfig};
pub use tuning::{minimal_change_tuning, simple_tuning, Metric, MinimalChangeConfig};

use num_traits::Zero;

use crate::algebra::{Instantiation, Rational, RationalFunction};
use crate::bn::{Query, QueryKind};
use crate::error::Result;

/// Exact evaluation of a query's conditionals at a candidate point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub conditionals: Vec<Rational>,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuningResult {
    pub instantiation: Instantiation,
    /// The constrained quantity (conditional, ratio or difference); absent
    /// for a ratio whose denominator vanishes.
    pub achieved_value: Option<Rational>,
    pub distance: Option<f64>,
    pub certificate: Certificate,
}

impl TuningResult {
    fn new(q: &Query, instantiation: Instantiation, certificate: Certificate, distance: Option<f64>) -> Self {
        let achieved_value = constrained_value(q, &certificate.conditionals);
        TuningResult { instantiation, achieved_value, distance, certificate }
    }
}

/// Evaluates `fs` (the query's conditionals) exactly at `u`.
pub fn certify(q: &Query, fs: &[RationalFunction], u: &Instantiation) -> Result<Certificate> {
    let conditionals = fs.iter().map(|f| f.eval(u.values())).collect::<Result<Vec<_>>>()?;
    let satisfied = q.holds(&conditionals[0], conditionals.get(1));
    Ok(Certificate { conditionals, satisfied })
}

/// The quantity a query constrains, from its conditionals.
pub fn constrained_value(q: &Query, conditionals: &[Rational]) -> Option<Rational> {
    match q.kind {
        QueryKind::Probability => Some(conditionals[0].clone()),
        QueryKind::Ratio => {
            let d = &conditionals[1];
            (!d.is_zero()).then(|| &conditionals[0] / d)
        }
        QueryKind::Difference => Some(&conditionals[0] - &conditionals[1]),
    }
}
