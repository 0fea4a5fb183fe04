mod common;

use common::{random_conditional, random_pbn, random_point, rng};
use num_traits::{One, Zero};
use pbnsynth::algebra::{Rational, RationalFunction};
use pbnsynth::bn::{Assignment, Cpt, Pbn, Variable};
use pbnsynth::io::{explicit_pmc_string, parse_pbif, read_explicit_pmc, render_pbif};
use pbnsynth::pmc::Pmc;
use pbnsynth::transform::{build_pmc, build_query_pmc, open_set};
use proptest::prelude::*;
use rand::Rng;

fn row_sums_are_one(m: &Pmc) -> bool {
    (0..m.num_states()).all(|s| {
        let mut sum = RationalFunction::zero(m.nparams());
        for (_, f) in m.successors(s) {
            sum = sum.try_add(f).unwrap();
        }
        sum.is_one()
    })
}

fn same_chain(a: &Pmc, b: &Pmc) -> bool {
    a.num_states() == b.num_states()
        && a.initial() == b.initial()
        && (0..a.num_states()).all(|s| {
            a.state(s) == b.state(s)
                && a.successors(s).len() == b.successors(s).len()
                && a.successors(s)
                    .iter()
                    .zip(b.successors(s))
                    .all(|((t, f), (u, g))| t == u && f.equivalent(g))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn instantiated_rows_sum_to_one(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_pbn(&mut r, 6, 3, 3);
        let bn = b.instantiate(&random_point(&mut r, &b)).unwrap();
        for v in b.var_ids() {
            for row in bn.table(v) {
                prop_assert!(row.iter().sum::<Rational>().is_one());
            }
        }
    }

    #[test]
    fn marginals_sum_to_one(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_pbn(&mut r, 5, 3, 3);
        let bn = b.instantiate(&random_point(&mut r, &b)).unwrap();
        for v in b.var_ids() {
            let total: Rational = (0..b.variable(v).arity())
                .map(|d| bn.probability(&Assignment::new(vec![(v, d)]).unwrap()).unwrap())
                .sum();
            prop_assert!(total.is_one());
        }
    }

    #[test]
    fn subclass_ignores_names_and_row_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_pbn(&mut r, 6, 3, 3);
        let variables = b
            .variables()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let labels: Vec<String> = (0..v.arity()).map(|k| format!("s{k}")).collect();
                let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
                Variable::new(format!("renamed{i}"), &labels)
            })
            .collect();
        let cpts = b
            .cpts()
            .iter()
            .map(|c| {
                let mut rows = c.rows.clone();
                let k = r.gen_range(0..rows.len());
                rows.rotate_left(k);
                Cpt { parents: c.parents.clone(), rows }
            })
            .collect();
        let other = Pbn::new("other", b.params().clone(), variables, cpts).unwrap();
        prop_assert_eq!(b.classify(), other.classify());
    }

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let b = random_pbn(&mut rng(seed), 6, 3, 3);
        let text = render_pbif(&b);
        prop_assert_eq!(parse_pbif(&text).unwrap(), b, "{}", text);
    }

    #[test]
    fn explicit_listing_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_pbn(&mut r, 5, 3, 3);
        let order = b.topological_order().unwrap();
        let (h, e) = random_conditional(&mut r, &b);
        for m in [build_pmc(&b, &order).unwrap(), build_query_pmc(&b, &order, &h, &e).unwrap()] {
            let back = read_explicit_pmc(&explicit_pmc_string(&m)).unwrap();
            prop_assert!(same_chain(&m, &back));
        }
    }

    #[test]
    fn chains_are_stochastic_and_layered(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_pbn(&mut r, 6, 3, 3);
        let order = b.topological_order().unwrap();
        let (h, e) = random_conditional(&mut r, &b);
        let plain = build_pmc(&b, &order).unwrap();
        let tailored = build_query_pmc(&b, &order, &h, &e).unwrap();
        prop_assert!(row_sums_are_one(&plain));
        prop_assert!(row_sums_are_one(&tailored));
        for s in 0..plain.num_states() {
            for (t, _) in plain.successors(s) {
                if *t == s {
                    prop_assert!(plain.is_final(s));
                } else {
                    prop_assert!(plain.state(*t).level > plain.state(s).level);
                }
            }
        }
    }

    #[test]
    fn state_count_bound(seed in any::<u64>()) {
        let b = random_pbn(&mut rng(seed), 6, 3, 3);
        let order = b.topological_order().unwrap();
        let m = build_pmc(&b, &order).unwrap();
        let bound: usize = 1 + (1..=order.len())
            .map(|j| {
                let open: usize = open_set(&b, &order, j).iter().map(|v| b.variable(*v).arity()).product();
                b.variable(order[j - 1]).arity() * open
            })
            .sum::<usize>();
        prop_assert!(m.num_states() <= bound, "{} > {}", m.num_states(), bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Each joint outcome with positive probability is traced by exactly one
    /// path from the initial state to a final state, whose weight is the
    /// outcome's probability.
    #[test]
    fn outcomes_are_paths(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_pbn(&mut r, 5, 3, 3);
        let u = random_point(&mut r, &b);
        let bn = b.instantiate(&u).unwrap();
        let order = b.topological_order().unwrap();
        let m = build_pmc(&b, &order).unwrap();
        let mc = m.instantiate(&u).unwrap();
        for _ in 0..1000 {
            let w: Vec<usize> = b.var_ids().map(|v| r.gen_range(0..b.variable(v).arity())).collect();
            let mut s = m.initial();
            let mut weight = Rational::one();
            let mut traced = true;
            while !m.is_final(s) {
                let next: Vec<usize> = (0..m.successors(s).len())
                    .filter(|&k| {
                        let t = m.successors(s)[k].0;
                        m.state(t).valuation.iter().zip(&w).all(|(x, y)| x.map_or(true, |x| x == *y))
                    })
                    .collect();
                prop_assert!(next.len() <= 1);
                let Some(&k) = next.first() else {
                    traced = false;
                    break;
                };
                let (t, p) = &mc.transitions[s][k];
                weight *= p;
                s = *t;
            }
            let joint = bn.joint_probability(&w);
            if traced {
                prop_assert_eq!(weight, joint);
            } else {
                prop_assert!(joint.is_zero());
            }
        }
    }
}
