use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::lift::{BoundPair, Lifter};
use crate::algebra::{ParameterSet, Rational, Region};
use crate::bn::{Comparison, Pbn, Query, QueryKind};
use crate::error::{Error, Result};
use crate::pmc::StatePredicate;
use crate::transform::build_query_pmc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionLabel {
    Accepting,
    Rejecting,
    Unknown,
}

impl RegionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::Accepting => "accepting",
            RegionLabel::Rejecting => "rejecting",
            RegionLabel::Unknown => "unknown",
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// True iff every CPT entry lies in [0, 1] at every corner of `r`.
/// Entries must be multi-affine, so corners decide the whole box.
pub fn region_wellformed(b: &Pbn, r: &Region) -> Result<bool> {
    let zero = Rational::zero();
    let one = Rational::one();
    let base: Vec<Rational> = r.intervals().iter().map(|iv| iv.lo.clone()).collect();
    for v in b.var_ids() {
        for (i, row) in b.cpt(v).rows.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if !f.is_multi_affine() {
                    return Err(Error::NotMultiAffineEntry {
                        variable: b.variable(v).name.clone(),
                        row: i,
                        column: j,
                    });
                }
                for corner in r.vertices(&f.variables())? {
                    let mut point = base.clone();
                    for (id, x) in corner {
                        point[id.0] = x;
                    }
                    let x = f.eval(&point);
                    if x < zero || x > one {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Decides constraints over regions by lifting each conditional of a query
/// on its evidence-tailored chain.
#[derive(Clone, Debug)]
pub struct Verifier {
    params: Arc<ParameterSet>,
    query: Query,
    lifters: Vec<Lifter>,
    same: bool,
}

impl Verifier {
    pub fn new(b: &Pbn, q: &Query) -> Result<Self> {
        let order = b.topological_order()?;
        let mut lifters = Vec::new();
        for (h, e) in q.conditionals() {
            let m = build_query_pmc(b, &order, h, e)?;
            if !(0..m.num_states()).any(|s| m.is_final(s)) {
                return Err(Error::ImpossibleEvidence);
            }
            let target = StatePredicate::All(vec![StatePredicate::Final, StatePredicate::Satisfies(h.clone())]);
            lifters.push(Lifter::new(&m, m.select(&target))?);
        }
        let c = q.conditionals();
        let same = c.len() == 2 && c[0] == c[1];
        Ok(Verifier { params: b.params_arc(), query: q.clone(), lifters, same })
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn query(&self) -> &Query {
        &self.query
    }

    /// Bounds on each conditional over `r`.
    pub fn bounds(&self, r: &Region) -> Result<Vec<BoundPair>> {
        if self.same {
            let b = self.lifters[0].bounds(r)?;
            return Ok(vec![b.clone(), b]);
        }
        self.lifters.iter().map(|l| l.bounds(r)).collect()
    }

    /// Range of `lhs - rhs` over `r`, where the constraint reads `lhs ∼ rhs`.
    pub fn slack_range(&self, r: &Region) -> Result<(Rational, Rational)> {
        let bs = self.bounds(r)?;
        let q = &self.query.threshold;
        let t = &bs[0];
        Ok(match self.query.kind {
            QueryKind::Probability => (&t.lower - q, &t.upper - q),
            QueryKind::Ratio if self.same => {
                let c = Rational::one() - q;
                if c >= Rational::zero() {
                    (&c * &t.lower, &c * &t.upper)
                } else {
                    (&c * &t.upper, &c * &t.lower)
                }
            }
            QueryKind::Difference if self.same => (-q.clone(), -q.clone()),
            QueryKind::Ratio => {
                let g = &bs[1];
                (&t.lower - q * &g.upper, &t.upper - q * &g.lower)
            }
            QueryKind::Difference => {
                let g = &bs[1];
                (&t.lower - &g.upper - q, &t.upper - &g.lower - q)
            }
        })
    }

    pub fn verify(&self, r: &Region) -> Result<RegionLabel> {
        let (lo, hi) = self.slack_range(r)?;
        Ok(label(self.query.comparison, &lo, &hi))
    }
}

/// Label of a region whose slack `lhs - rhs` ranges over `[lo, hi]`.
pub fn label(cmp: Comparison, lo: &Rational, hi: &Rational) -> RegionLabel {
    let zero = Rational::zero();
    let (accept, reject) = match cmp {
        Comparison::Ge => (*lo >= zero, *hi < zero),
        Comparison::Gt => (*lo > zero, *hi <= zero),
        Comparison::Le => (*hi <= zero, *lo > zero),
        Comparison::Lt => (*hi < zero, *lo >= zero),
    };
    if accept {
        RegionLabel::Accepting
    } else if reject {
        RegionLabel::Rejecting
    } else {
        RegionLabel::Unknown
    }
}

pub fn verify_region(b: &Pbn, q: &Query, r: &Region) -> Result<RegionLabel> {
    Verifier::new(b, q)?.verify(r)
}
