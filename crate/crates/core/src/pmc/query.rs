use num_traits::Signed;

use super::model::StatePredicate;
use crate::algebra::{Instantiation, ParamId, Rational, RationalFunction};
use crate::bn::{Assignment, Pbn, Query, QueryKind};
use crate::error::{Error, Result};
use crate::transform::{build_pmc, build_query_pmc};

/// How a conditional probability is obtained from a chain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Query-agnostic chain; `P(h | e) = (1 - P(◇(¬h ∨ ¬e))) / (1 - P(◇¬e))`.
    Plain,
    /// Restarting chain; `P(h | e)` is the probability of reaching a final
    /// state that satisfies `h`.
    #[default]
    EvidenceTailored,
}

/// `P(hypothesis | evidence)` as a function of the parameters.
pub fn conditional_function(
    b: &Pbn,
    hypothesis: &Assignment,
    evidence: &Assignment,
    mode: Mode,
) -> Result<RationalFunction> {
    let order = b.topological_order()?;
    match mode {
        Mode::Plain => {
            let m = build_pmc(b, &order)?;
            let not_e = StatePredicate::Violates(evidence.clone());
            let not_h_or_e = StatePredicate::Any(vec![
                StatePredicate::Violates(hypothesis.clone()),
                not_e.clone(),
            ]);
            let den = m.reach_function(&m.select(&not_e))?.complement();
            if den.is_zero() {
                return Err(Error::ImpossibleEvidence);
            }
            let num = m.reach_function(&m.select(&not_h_or_e))?.complement();
            num.try_div(&den)
        }
        Mode::EvidenceTailored => {
            let m = build_query_pmc(b, &order, hypothesis, evidence)?;
            // zero edges are never built, so a final state exists iff the
            // evidence has a positive probability somewhere
            if !(0..m.num_states()).any(|s| m.is_final(s)) {
                return Err(Error::ImpossibleEvidence);
            }
            let target = StatePredicate::All(vec![
                StatePredicate::Final,
                StatePredicate::Satisfies(hypothesis.clone()),
            ]);
            m.reach_function(&m.select(&target)).map_err(|e| match e {
                Error::SureSelfLoop(_) => Error::ImpossibleEvidence,
                other => other,
            })
        }
    }
}

/// One function per conditional compared by the query.
pub fn query_functions(b: &Pbn, q: &Query, mode: Mode) -> Result<Vec<RationalFunction>> {
    q.conditionals()
        .into_iter()
        .map(|(h, e)| conditional_function(b, h, e, mode))
        .collect()
}

/// The quantity the query constrains: the conditional itself, the ratio of
/// the two conditionals, or their difference.
pub fn query_prob(b: &Pbn, q: &Query, mode: Mode) -> Result<RationalFunction> {
    let fs = query_functions(b, q, mode)?;
    match q.kind {
        QueryKind::Probability => Ok(fs[0].clone()),
        QueryKind::Ratio => fs[0].try_div(&fs[1]),
        QueryKind::Difference => fs[0].try_sub(&fs[1]),
    }
}

pub fn sensitivity_function(b: &Pbn, q: &Query) -> Result<RationalFunction> {
    query_prob(b, q, Mode::EvidenceTailored)
}

/// `|∂f/∂x|` at `u0`, where `f` is the sensitivity function.
pub fn sensitivity_value(b: &Pbn, q: &Query, x: ParamId, u0: &Instantiation) -> Result<Rational> {
    if x.0 >= b.nparams() {
        return Err(Error::InvalidParameter(format!("no parameter with index {}", x.0)));
    }
    let f = sensitivity_function(b, q)?;
    f.eval(u0.values())?;
    Ok(f.diff(x).eval(u0.values())?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat_to_f64, ratio, Polynomial};
    use crate::bn::testing::pregnancy;
    use crate::bn::Comparison;
    use crate::transform::build_pmc;

    fn at(b: &Pbn, p: Rational, q: Rational) -> Instantiation {
        Instantiation::new(b.params(), vec![p, q]).unwrap()
    }

    fn posterior() -> (Pbn, Assignment, Assignment) {
        let b = pregnancy();
        let h = Assignment::from_names(&b, &[("Pregnancy", "yes")]).unwrap();
        let e = Assignment::from_names(&b, &[("UrineTest", "neg"), ("BloodTest", "neg")]).unwrap();
        (b, h, e)
    }

    fn closed_form() -> RationalFunction {
        let p = Polynomial::var(2, ParamId(0));
        let q = Polynomial::var(2, ParamId(1));
        let s_yes = (&p * &q).scale(&ratio(87, 100));
        let s_no = Polynomial::constant(2, ratio(10378446, 100000000));
        RationalFunction::new(s_yes.clone(), &s_yes + &s_no).unwrap()
    }

    #[test]
    fn evidence_violation_reach_probability() {
        let b = pregnancy();
        let m = build_pmc(&b, &b.topological_order().unwrap()).unwrap();
        let e = Assignment::from_names(&b, &[("UrineTest", "neg"), ("BloodTest", "neg")]).unwrap();
        let t = m.select(&StatePredicate::Violates(e));
        let mc = m.instantiate(&at(&b, ratio(36, 100), ratio(27, 100))).unwrap();
        assert_eq!(mc.reach_prob(&t), ratio(81165154, 100000000));
        let f = m.reach_function(&t).unwrap();
        let pq = &Polynomial::var(2, ParamId(0)) * &Polynomial::var(2, ParamId(1));
        let mass = &pq.scale(&ratio(87, 100)) + &Polynomial::constant(2, ratio(10378446, 100000000));
        assert!(f.equivalent(&RationalFunction::from_poly(mass).complement()));
    }

    #[test]
    fn both_modes_give_the_posterior() {
        let (b, h, e) = posterior();
        let u = at(&b, ratio(36, 100), ratio(27, 100));
        for mode in [Mode::Plain, Mode::EvidenceTailored] {
            let f = conditional_function(&b, &h, &e, mode).unwrap();
            assert!(f.equivalent(&closed_form()), "{mode:?}");
            assert!((rat_to_f64(&f.eval(u.values()).unwrap()) - 0.448976).abs() < 1e-6);
        }
    }

    #[test]
    fn prior_without_evidence() {
        let (b, h, _) = posterior();
        for mode in [Mode::Plain, Mode::EvidenceTailored] {
            let f = conditional_function(&b, &h, &Assignment::empty(), mode).unwrap();
            assert_eq!(f.constant_value(), Some(ratio(87, 100)));
        }
    }

    #[test]
    fn impossible_evidence() {
        let src = "network z {}\nparameters { p in [0.1, 0.9]; }\n\
            variable A { type discrete [2] { a0, a1 }; }\n\
            variable B { type discrete [2] { b0, b1 }; }\n\
            probability ( A ) { table p, 1 - p; }\n\
            probability ( B | A ) { (a0) 0, 1; (a1) 0, 1; }\n";
        let b = crate::io::parse_pbif(src).unwrap();
        let h = Assignment::from_names(&b, &[("A", "a1")]).unwrap();
        let e = Assignment::from_names(&b, &[("B", "b0")]).unwrap();
        for mode in [Mode::Plain, Mode::EvidenceTailored] {
            assert!(matches!(conditional_function(&b, &h, &e, mode), Err(Error::ImpossibleEvidence)));
        }
    }

    #[test]
    fn sensitivity_of_p() {
        let (b, h, e) = posterior();
        let q = Query::probability(h, e, Comparison::Le, ratio(1, 5)).unwrap();
        let u = at(&b, ratio(36, 100), ratio(27, 100));
        let v = sensitivity_value(&b, &q, ParamId(0), &u).unwrap();
        assert!((rat_to_f64(&v) - 0.6872127).abs() < 1e-6);
    }
}
