//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero when any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{pregnancy, random_conditional, random_pbn, random_point, rng, POSTERIOR};
use pbnsynth::algebra::{rat_to_f64, ratio, Instantiation, ParamId, Rational, Region};
use pbnsynth::bn::{Assignment, Pbn};
use pbnsynth::io::{parse_instantiation, parse_pbif, parse_query};
use pbnsynth::pla::{partition_query, PartitionConfig, RegionLabel, RegionPartition};
use pbnsynth::pmc::{conditional_function, query_functions, sensitivity_function, Mode, StatePredicate};
use pbnsynth::synth::{feasibility_pso, minimal_change_tuning, MinimalChangeConfig, PsoConfig};
use pbnsynth::transform::{build_pmc, build_query_pmc};
use pbnsynth::Error;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const MODELS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/models/");

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// `P(yes | neg, neg) <= 0.2` holds iff `p*q <= ROOT`, where
/// `0.87*ROOT / (0.87*ROOT + K) = 0.2` and `K = 0.13 * 0.893 * 0.894`.
fn root_product() -> f64 {
    let k = 0.13 * 0.893 * 0.894;
    0.25 * k / 0.87
}

fn cli(args: &[&str]) -> (i32, String, Duration) {
    let mut out = Vec::new();
    let t = Instant::now();
    let code = pbnsynth::cli::run(std::iter::once("pbnsynth").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap(), t.elapsed())
}

fn check_value(p: &str, q: &str) -> Option<f64> {
    let model = format!("{MODELS}pregnancy.pbif");
    let query = format!("{POSTERIOR} <= 0.2");
    let inst = format!("p={p},q={q}");
    let (_, out, _) = cli(&["check", "--model", &model, "--query", &query, "--instantiation", &inst]);
    out.lines().next()?.parse().ok()
}

fn criterion_1() -> Outcome {
    let model = format!("{MODELS}pregnancy.pbif");
    let query = format!("{POSTERIOR} <= 0.2");
    let (code, out, t) = cli(&["check", "--model", &model, "--query", &query, "--instantiation", "p=0.36,q=0.27"]);
    let v: f64 = out.lines().next().and_then(|l| l.parse().ok()).unwrap_or(f64::NAN);
    let oracle = common::pregnancy_posterior(0.36, 0.27);
    let pass = (v - 0.448976).abs() <= 1e-6 && (v - oracle).abs() <= 1e-9 && code == 1 && t < Duration::from_millis(100);
    outcome(pass, format!("printed {v:.9} (oracle {oracle:.9}), exit {code}, {t:?}"))
}

fn one_way(b: &Pbn, free: usize, coverage: Rational) -> (f64, Duration) {
    let q = common::posterior(b, "<= 0.2");
    let u0 = common::point(b, &[0.36, 0.27]);
    let cfg = MinimalChangeConfig {
        partition: PartitionConfig::with_coverage(coverage),
        free: Some(vec![ParamId(free)]),
        ..Default::default()
    };
    let t = Instant::now();
    let r = minimal_change_tuning(b, &q, &u0, &cfg).unwrap();
    assert!(r.certificate.satisfied);
    (rat_to_f64(&r.instantiation.values()[free]), t.elapsed())
}

fn criterion_2() -> Outcome {
    let b = pregnancy();
    let c = Rational::from_integer(1.into()) - ratio(1, 10_000_000_000);
    let (p, tp) = one_way(&b, 0, c.clone());
    let (q, tq) = one_way(&b, 1, c);
    let (p_root, q_root) = (root_product() / 0.27, root_product() / 0.36);
    let limit = Duration::from_secs(5);
    let pass = (p - 0.110456).abs() <= 1e-4
        && (q - 0.082842).abs() <= 1e-4
        && (p - p_root).abs() <= 1e-4
        && (q - q_root).abs() <= 1e-4
        && tp < limit
        && tq < limit;
    outcome(
        pass,
        format!("p = {p:.6} ({tp:?}), q = {q:.6} ({tq:?}); closed-form roots {p_root:.6}, {q_root:.6}"),
    )
}

fn criterion_3() -> Outcome {
    let a = check_value("0.120097", "0.27").unwrap_or(f64::NAN);
    let b = check_value("0.36", "0.089892").unwrap_or(f64::NAN);
    let pass = (a - 0.2).abs() <= 0.01 && (b - 0.2).abs() <= 0.01;
    outcome(pass, format!("f(0.120097, 0.27) = {a:.6}, f(0.36, 0.089892) = {b:.6}; threshold 0.2 +- 0.01"))
}

/// Share of [lo, hi]^2 where `p*q <= c`, by the midpoint rule in `p`.
fn integrated_fraction(c: f64, lo: f64, hi: f64) -> f64 {
    let n = 1_000_000;
    let h = (hi - lo) / n as f64;
    let mut area = 0.0;
    for i in 0..n {
        let p = lo + (i as f64 + 0.5) * h;
        area += ((c / p).min(hi) - lo).max(0.0) * h;
    }
    area / ((hi - lo) * (hi - lo))
}

/// Checks `per_region` random points of every decided region against the
/// exact conditionals.
fn sound(b: &Pbn, part: &RegionPartition, per_region: usize, r: &mut ChaCha8Rng) -> (bool, usize) {
    let q = &part.query;
    let fs = query_functions(b, q, Mode::EvidenceTailored).unwrap();
    let mut checked = 0;
    for (region, label) in &part.regions {
        if *label == RegionLabel::Unknown {
            continue;
        }
        for _ in 0..per_region {
            let u = sample(r, b, region);
            let c: Vec<Rational> = fs.iter().map(|f| f.eval(u.values()).unwrap()).collect();
            if q.holds(&c[0], c.get(1)) != (*label == RegionLabel::Accepting) {
                return (false, checked);
            }
            checked += 1;
        }
    }
    (true, checked)
}

fn sample(r: &mut ChaCha8Rng, b: &Pbn, region: &Region) -> Instantiation {
    let values = region
        .intervals()
        .iter()
        .map(|iv| &iv.lo + iv.width() * ratio(r.gen_range(0..=1_000_000), 1_000_000))
        .collect();
    Instantiation::new(b.params(), values).unwrap()
}

fn criterion_4() -> Outcome {
    let model = format!("{MODELS}pregnancy.pbif");
    let query = format!("{POSTERIOR} <= 0.2");
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("partition.json");
    let svg = dir.path().join("partition.svg");
    let (code, _, t) = cli(&[
        "partition", "--model", &model, "--query", &query, "--coverage", "0.99",
        "--out", json.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    let b = pregnancy();
    let part = partition_query(&b, &common::posterior(&b, "<= 0.2"), None, &PartitionConfig::default()).unwrap();
    let fraction = rat_to_f64(&part.fraction(RegionLabel::Accepting));
    let oracle = integrated_fraction(root_product(), 0.001, 0.999);
    let (ok, checked) = sound(&b, &part, 100, &mut rng(4));
    let pass = code == 0
        && t < Duration::from_secs(30)
        && (fraction - oracle).abs() <= 0.01
        && (fraction - 0.134).abs() <= 0.01
        && ok
        && svg.exists();
    outcome(
        pass,
        format!(
            "{t:?}, accepting fraction {fraction:.4} vs integrated {oracle:.4}, {} regions, {checked} sampled points {}",
            part.regions.len(),
            if ok { "agree" } else { "DISAGREE" }
        ),
    )
}

struct Corpus {
    models: Vec<(Pbn, Assignment, Assignment)>,
}

fn corpus() -> Corpus {
    let mut r = rng(2024);
    let models = (0..200)
        .map(|_| {
            let b = random_pbn(&mut r, 6, 3, 3);
            let (h, e) = random_conditional(&mut r, &b);
            (b, h, e)
        })
        .collect();
    Corpus { models }
}

fn criterion_5(c: &Corpus) -> Outcome {
    let t = Instant::now();
    let mut r = rng(5);
    let mut worst = 0.0f64;
    let mut compared = 0;
    let mut failures = 0;
    for (b, h, e) in &c.models {
        let fs = [
            conditional_function(b, h, e, Mode::Plain),
            conditional_function(b, h, e, Mode::EvidenceTailored),
        ];
        for _ in 0..5 {
            let u = random_point(&mut r, b);
            match b.instantiate(&u).unwrap().joint_oracle(h, e) {
                Ok(expected) => {
                    for f in &fs {
                        match f {
                            Ok(f) => {
                                let d = rat_to_f64(&(f.eval(u.values()).unwrap() - &expected)).abs();
                                worst = worst.max(d);
                                compared += 1;
                            }
                            Err(_) => failures += 1,
                        }
                    }
                }
                Err(Error::ZeroProbabilityEvidence) => {
                    failures += fs.iter().filter(|f| !matches!(f, Err(Error::ImpossibleEvidence))).count();
                }
                Err(_) => failures += 1,
            }
        }
    }
    let t = t.elapsed();
    let pass = failures == 0 && worst <= 1e-9 && t < Duration::from_secs(60);
    outcome(pass, format!("{compared} comparisons over 200 models, max error {worst:e}, {failures} failures, {t:?}"))
}

fn criterion_6(c: &Corpus) -> Outcome {
    let mut r = rng(6);
    let mut worst = 0.0f64;
    let mut compared = 0;
    let mut failures = 0;
    for (b, h, e) in &c.models {
        let order = b.topological_order().unwrap();
        let plain = build_pmc(b, &order).unwrap();
        let tailored = build_query_pmc(b, &order, h, e).unwrap();
        let chains = [
            (plain.select(&StatePredicate::Violates(e.clone())), plain),
            (
                tailored.select(&StatePredicate::All(vec![StatePredicate::Final, StatePredicate::Satisfies(h.clone())])),
                tailored,
            ),
        ];
        for (targets, m) in &chains {
            let f = match m.reach_function(targets) {
                Ok(f) => f,
                // evidence that can never hold leaves only the restart loop
                Err(Error::SureSelfLoop(_)) if !(0..m.num_states()).any(|s| m.is_final(s)) => continue,
                Err(_) => {
                    failures += 1;
                    continue;
                }
            };
            for _ in 0..20 {
                let u = random_point(&mut r, b);
                let exact = m.instantiate(&u).unwrap().reach_prob(targets);
                worst = worst.max(rat_to_f64(&(f.eval(u.values()).unwrap() - exact)).abs());
                compared += 1;
            }
        }
    }
    let pass = failures == 0 && worst <= 1e-12;
    outcome(pass, format!("{compared} comparisons, max error {worst:e}, {failures} failures"))
}

fn criterion_7() -> Outcome {
    let b = parse_pbif(common::ASIA14).unwrap();
    let q = parse_query(&b, "P(lung=yes | xray=yes, dysp=yes) >= 0.5").unwrap();
    let t = Instant::now();
    let f = sensitivity_function(&b, &q).unwrap();
    let t = t.elapsed();
    let u = parse_instantiation(
        &b,
        "a1=0.01,t1=0.05,t2=0.01,s1=0.5,l1=0.1,l2=0.01,b1=0.6,b2=0.3,x1=0.98,x2=0.05,d1=0.9,d2=0.7,d3=0.8,d4=0.1",
    )
    .unwrap();
    let value = f.eval(u.values()).unwrap();
    let oracle = b.instantiate(&u).unwrap().joint_oracle(&q.hypothesis, &q.evidence).unwrap();
    let pass = b.nparams() == 14 && f.variables().len() <= 14 && value == oracle && t < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "{} parameters, function over {} of them, {t:?}, value at the original CPTs {:.6} (enumeration {:.6})",
            b.nparams(),
            f.variables().len(),
            rat_to_f64(&value),
            rat_to_f64(&oracle)
        ),
    )
}

fn criterion_8() -> Outcome {
    let b = pregnancy();
    let rq = parse_query(&b, "RATIO(Pregnancy=yes : Pregnancy=no | UrineTest=neg, BloodTest=neg) >= 1").unwrap();
    let dq = parse_query(&b, "DIFF(Pregnancy=yes - Pregnancy=no | UrineTest=neg, BloodTest=neg) >= 0").unwrap();
    let cfg = PartitionConfig::default();
    let rp = partition_query(&b, &rq, None, &cfg).unwrap();
    let dp = partition_query(&b, &dq, None, &cfg).unwrap();
    let mut r = rng(8);
    let (rs, rn) = sound(&b, &rp, 20, &mut r);
    let (ds, dn) = sound(&b, &dp, 20, &mut r);

    let fs = query_functions(&b, &rq, Mode::EvidenceTailored).unwrap();
    let full = Region::full(b.params());
    let mut disagreements = 0;
    for _ in 0..10_000 {
        let u = sample(&mut r, &b, &full);
        let (yes, no) = (fs[0].eval(u.values()).unwrap(), fs[1].eval(u.values()).unwrap());
        let gap = rat_to_f64(&(&yes - &no));
        if gap.abs() > 1e-9 && rq.holds(&yes, Some(&no)) != dq.holds(&yes, Some(&no)) {
            disagreements += 1;
        }
    }
    let pass = rs && ds && disagreements == 0;
    outcome(
        pass,
        format!(
            "ratio {rn} / difference {dn} sampled points sound; accepting {:.4} vs {:.4}; {disagreements} boundary disagreements",
            rat_to_f64(&rp.fraction(RegionLabel::Accepting)),
            rat_to_f64(&dp.fraction(RegionLabel::Accepting))
        ),
    )
}

fn criterion_9() -> Outcome {
    let b = pregnancy();
    let t = Instant::now();
    let found = feasibility_pso(&b, &common::posterior(&b, "<= 0.2"), &PsoConfig::default()).unwrap();
    let t = t.elapsed();
    let certified = found.as_ref().is_some_and(|r| {
        let f = sensitivity_function(&b, &common::posterior(&b, "<= 0.2")).unwrap();
        let v = f.eval(r.instantiation.values()).unwrap();
        r.certificate.satisfied && v <= ratio(1, 5)
    });
    let none = feasibility_pso(&b, &common::posterior(&b, "<= 0"), &PsoConfig::default()).unwrap();
    let pass = certified && t < Duration::from_secs(1) && none.is_none();
    outcome(
        pass,
        format!(
            "found {} in {t:?}; threshold 0 gives {}",
            found.map_or("nothing".into(), |r| r.instantiation.to_string()),
            if none.is_none() { "infeasible" } else { "a point" }
        ),
    )
}

fn criterion_10() -> Outcome {
    let b = pregnancy();
    let coverages = [ratio(9, 10), ratio(99, 100), ratio(999, 1000), ratio(999_999, 1_000_000)];
    let mut lines = Vec::new();
    let mut pass = true;
    for (free, fixed) in [(0, 0.27), (1, 0.36)] {
        let root = root_product() / fixed;
        let errors: Vec<f64> = coverages.iter().map(|c| (one_way(&b, free, c.clone()).0 - root).abs()).collect();
        pass &= errors.windows(2).all(|w| w[1] <= w[0]) && errors[3] < errors[0];
        lines.push(format!(
            "{}: {}",
            ["p", "q"][free],
            errors.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(", ")
        ));
    }
    outcome(pass, lines.join("; "))
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("pregnancy inference", Box::new(criterion_1)),
        ("one-way tuning", Box::new(criterion_2)),
        ("alternative one-way suggestions", Box::new(criterion_3)),
        ("two-parameter partition", Box::new(criterion_4)),
        ("oracle equivalence", Box::new(|| criterion_5(&corpus))),
        ("state elimination", Box::new(|| criterion_6(&corpus))),
        ("asia with 14 parameters", Box::new(criterion_7)),
        ("ratio/difference soundness", Box::new(criterion_8)),
        ("feasibility search", Box::new(criterion_9)),
        ("precision vs coverage", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {}: {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

