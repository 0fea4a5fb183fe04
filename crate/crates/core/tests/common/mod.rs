#![allow(dead_code)]

use pbnsynth::algebra::{
    rat_to_f64, ratio, Instantiation, ParamId, Parameter, ParameterSet, Polynomial, Rational,
};
use pbnsynth::bn::{Assignment, Comparison, Cpt, Pbn, Query, VarId, Variable};
use pbnsynth::io::{parse_pbif, parse_query};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PREGNANCY: &str = include_str!("../../models/pregnancy.pbif");
pub const ASIA14: &str = include_str!("../../models/asia14.pbif");
pub const POSTERIOR: &str = "P(Pregnancy=yes | UrineTest=neg, BloodTest=neg)";

pub fn pregnancy() -> Pbn {
    parse_pbif(PREGNANCY).unwrap()
}

/// `POSTERIOR` followed by `constraint`, e.g. `"<= 0.2"`.
pub fn posterior(b: &Pbn, constraint: &str) -> Query {
    parse_query(b, &format!("{POSTERIOR} {constraint}")).unwrap()
}

pub fn point(b: &Pbn, values: &[f64]) -> Instantiation {
    Instantiation::new(b.params(), values.iter().map(|&v| Rational::from_float(v).unwrap()).collect()).unwrap()
}

/// `P(yes | neg, neg)` written out by hand from the CPTs.
pub fn pregnancy_posterior(p: f64, q: f64) -> f64 {
    let yes = 0.87 * p * q;
    yes / (yes + 0.13 * 0.893 * 0.894)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random probability vector of small rationals; zero entries occur.
fn distribution(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let mut w: Vec<i64> = (0..n)
        .map(|_| if rng.gen_bool(0.1) { 0 } else { rng.gen_range(1..=9) })
        .collect();
    if w.iter().all(|&x| x == 0) {
        w[rng.gen_range(0..n)] = 1;
    }
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| ratio(x, total)).collect()
}

/// Random pBN whose rows sum to one symbolically and stay within [0, 1]
/// for every parameter value in [0, 1]. Parametric entries are `s*t` and
/// `s*(1 - t)` with `t` one parameter, its complement, or a product of two.
pub fn random_pbn(rng: &mut ChaCha8Rng, max_vars: usize, max_vals: usize, max_params: usize) -> Pbn {
    let nv = rng.gen_range(1..=max_vars);
    let np = rng.gen_range(0..=max_params);
    let params: Vec<Parameter> = (0..np)
        .map(|i| {
            let lo = ratio(rng.gen_range(1..=10), 100);
            let hi = ratio(rng.gen_range(90..=99), 100);
            Parameter::new(format!("x{i}"), lo, hi).unwrap()
        })
        .collect();
    let labels = ["a", "b", "c", "d"];
    let variables: Vec<Variable> = (0..nv)
        .map(|i| Variable::new(format!("V{i}"), &labels[..rng.gen_range(2..=max_vals)]))
        .collect();
    let one = Polynomial::one(np);
    let mut cpts = Vec::new();
    for (i, var) in variables.iter().enumerate() {
        let mut parents: Vec<VarId> = (0..i).filter(|_| rng.gen_bool(0.4)).map(VarId).collect();
        parents.shuffle(rng);
        parents.truncate(2);
        let nrows: usize = parents.iter().map(|p| variables[p.0].arity()).product();
        let k = var.arity();
        let rows = (0..nrows)
            .map(|_| {
                let d = distribution(rng, k);
                let mut row: Vec<Polynomial> = d.iter().map(|c| Polynomial::constant(np, c.clone())).collect();
                if np > 0 && rng.gen_bool(0.6) {
                    let a = rng.gen_range(0..k);
                    let b = (a + rng.gen_range(1..k)) % k;
                    let s = &d[a] + &d[b];
                    if s > Rational::from_integer(0.into()) {
                        let x = Polynomial::var(np, ParamId(rng.gen_range(0..np)));
                        let t = match rng.gen_range(0..4) {
                            0 => &one - &x,
                            1 if np > 1 => {
                                let j = rng.gen_range(0..np);
                                let y = Polynomial::var(np, ParamId(j));
                                if y == x { x } else { &x * &y }
                            }
                            _ => x,
                        };
                        row[a] = t.scale(&s);
                        row[b] = (&one - &t).scale(&s);
                    }
                }
                row
            })
            .collect();
        cpts.push(Cpt { parents, rows });
    }
    Pbn::new("random", ParameterSet::new(params).unwrap(), variables, cpts).unwrap()
}

/// A random conditional on `b`: one or two hypothesis variables and up to
/// two evidence variables disjoint from them.
pub fn random_conditional(rng: &mut ChaCha8Rng, b: &Pbn) -> (Assignment, Assignment) {
    let mut vars: Vec<VarId> = b.var_ids().collect();
    vars.shuffle(rng);
    let nh = if vars.len() > 1 && rng.gen_bool(0.3) { 2 } else { 1 };
    let ne = rng.gen_range(0..=2).min(vars.len() - nh);
    let pick = |rng: &mut ChaCha8Rng, vs: &[VarId]| {
        let pairs = vs.iter().map(|&v| (v, rng.gen_range(0..b.variable(v).arity()))).collect();
        Assignment::new(pairs).unwrap()
    };
    let h = pick(rng, &vars[..nh]);
    let e = pick(rng, &vars[nh..nh + ne]);
    (h, e)
}

pub fn random_query(rng: &mut ChaCha8Rng, b: &Pbn) -> Query {
    let (h, e) = random_conditional(rng, b);
    let cmp = [Comparison::Le, Comparison::Lt, Comparison::Ge, Comparison::Gt][rng.gen_range(0..4)];
    Query::probability(h, e, cmp, ratio(rng.gen_range(1..=9), 10)).unwrap()
}

/// Uniform point on a grid of 1000 steps per parameter range.
pub fn random_point(rng: &mut ChaCha8Rng, b: &Pbn) -> Instantiation {
    let values = b
        .params()
        .iter()
        .map(|p| &p.lower + (&p.upper - &p.lower) * ratio(rng.gen_range(0..=1000), 1000))
        .collect();
    Instantiation::new(b.params(), values).unwrap()
}

pub fn close(a: &Rational, b: &Rational, tol: f64) -> bool {
    (rat_to_f64(a) - rat_to_f64(b)).abs() <= tol
}
