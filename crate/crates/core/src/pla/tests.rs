use std::time::Instant;

use super::*;
use crate::algebra::{rat_to_f64, ratio, Interval, Rational, Region};
use crate::bn::testing::pregnancy;
use crate::bn::{Assignment, Comparison, Pbn, Query};
use crate::pmc::StatePredicate;
use crate::transform::build_query_pmc;

fn query(b: &Pbn, cmp: Comparison, q: Rational) -> Query {
    let h = Assignment::from_names(b, &[("Pregnancy", "yes")]).unwrap();
    let e = Assignment::from_names(b, &[("UrineTest", "neg"), ("BloodTest", "neg")]).unwrap();
    Query::probability(h, e, cmp, q).unwrap()
}

fn square(b: &Pbn, lo: Rational, hi: Rational) -> Region {
    let iv = Interval::new(lo, hi);
    Region::new(b.params(), vec![iv.clone(), iv]).unwrap()
}

fn closed_form(p: f64, q: f64) -> f64 {
    0.87 * p * q / (0.87 * p * q + 0.10378446)
}

#[test]
fn bounds_enclose_the_range() {
    let b = pregnancy();
    let v = Verifier::new(&b, &query(&b, Comparison::Le, ratio(1, 5))).unwrap();
    let bs = v.bounds(&square(&b, ratio(1, 10), ratio(3, 10))).unwrap();
    let (lo, hi) = (rat_to_f64(&bs[0].lower), rat_to_f64(&bs[0].upper));
    assert!(lo <= closed_form(0.1, 0.1) + 1e-12, "{lo}");
    assert!(hi >= closed_form(0.3, 0.3) - 1e-12, "{hi}");
    assert!((lo - 0.077344).abs() < 1e-5 && (hi - 0.430020).abs() < 1e-5, "{lo} {hi}");
}

#[test]
fn point_region_is_exact() {
    let b = pregnancy();
    let order = b.topological_order().unwrap();
    let q = query(&b, Comparison::Le, ratio(1, 5));
    let m = build_query_pmc(&b, &order, &q.hypothesis, &q.evidence).unwrap();
    let target = m.select(&StatePredicate::All(vec![
        StatePredicate::Final,
        StatePredicate::Satisfies(q.hypothesis.clone()),
    ]));
    let u = crate::algebra::Instantiation::new(b.params(), vec![ratio(36, 100), ratio(27, 100)]).unwrap();
    let r = Region::point(&u);
    let exact = m.instantiate(&u).unwrap().reach_prob(&target);
    assert_eq!(lift_bounds(&m, &r, &target, Objective::Min).unwrap(), exact);
    assert_eq!(lift_bounds(&m, &r, &target, Objective::Max).unwrap(), exact);
    let none = vec![false; m.num_states()];
    assert_eq!(lift_bounds(&m, &r, &none, Objective::Max).unwrap(), ratio(0, 1));
}

#[test]
fn region_labels() {
    let b = pregnancy();
    let q = query(&b, Comparison::Le, ratio(1, 5));
    let v = Verifier::new(&b, &q).unwrap();
    assert_eq!(v.verify(&square(&b, ratio(5, 100), ratio(1, 10))).unwrap(), RegionLabel::Accepting);
    assert_eq!(v.verify(&square(&b, ratio(1, 2), ratio(999, 1000))).unwrap(), RegionLabel::Rejecting);
    assert_eq!(v.verify(&square(&b, ratio(1, 10), ratio(3, 10))).unwrap(), RegionLabel::Unknown);
}

#[test]
fn wellformedness_of_regions() {
    let b = pregnancy();
    assert!(region_wellformed(&b, &Region::full(b.params())).unwrap());
    let src = "network t {}\nparameters { x in [0, 1]; y in [0, 1]; }\n\
        variable A { type discrete [2] { a, b }; }\n\
        probability ( A ) { table x + y, 1 - x - y; }\n";
    let t = crate::io::parse_pbif(src).unwrap();
    let r = square(&t, ratio(6, 10), ratio(9, 10));
    assert!(!region_wellformed(&t, &r).unwrap());
    let src = "network t {}\nparameters { x in [0, 1]; }\n\
        variable A { type discrete [2] { a, b }; }\n\
        probability ( A ) { table 2*x^2, 1 - 2*x^2; }\n";
    let t = crate::io::parse_pbif(src).unwrap();
    assert!(region_wellformed(&t, &Region::full(t.params())).is_err());
}

#[test]
fn trivial_partitions() {
    let b = pregnancy();
    let cfg = PartitionConfig::default();
    let p = partition_query(&b, &query(&b, Comparison::Le, ratio(1, 1)), None, &cfg).unwrap();
    assert_eq!(p.regions.len(), 1);
    assert_eq!(p.regions[0].1, RegionLabel::Accepting);
    assert_eq!(p.coverage_achieved, ratio(1, 1));
    let p = partition_query(&b, &query(&b, Comparison::Lt, ratio(0, 1)), None, &cfg).unwrap();
    assert_eq!(p.regions, vec![(Region::full(b.params()), RegionLabel::Rejecting)]);
}

#[test]
fn pregnancy_partition() {
    let b = pregnancy();
    let start = Instant::now();
    let p = partition_query(&b, &query(&b, Comparison::Le, ratio(1, 5)), None, &PartitionConfig::default()).unwrap();
    eprintln!("{} regions, {} checks, {:?}", p.regions.len(), p.regions_checked, start.elapsed());
    assert!(!p.partial);
    assert!(p.coverage_achieved >= ratio(99, 100));
    let acc = rat_to_f64(&p.fraction(RegionLabel::Accepting));
    assert!((acc - 0.134).abs() < 0.01, "{acc}");
    for (r, l) in &p.regions {
        let c = r.center();
        let f = closed_form(rat_to_f64(&c[0]), rat_to_f64(&c[1]));
        match l {
            RegionLabel::Accepting => assert!(f <= 0.2),
            RegionLabel::Rejecting => assert!(f > 0.2),
            RegionLabel::Unknown => {}
        }
    }
}

#[test]
fn threads_do_not_change_the_result() {
    let b = pregnancy();
    let q = query(&b, Comparison::Le, ratio(1, 5));
    let mut cfg = PartitionConfig::with_coverage(ratio(9, 10));
    let one = partition_query(&b, &q, None, &cfg).unwrap();
    cfg.threads = 4;
    assert_eq!(partition_query(&b, &q, None, &cfg).unwrap(), one);
}

#[test]
fn budget_exhaustion_is_flagged() {
    let b = pregnancy();
    let q = query(&b, Comparison::Le, ratio(1, 5));
    let cfg = PartitionConfig { max_regions: 5, ..Default::default() };
    let p = partition_query(&b, &q, None, &cfg).unwrap();
    assert!(p.partial);
    assert_eq!(p.regions_checked, 5);
    let total: Rational = p.regions.iter().map(|(r, _)| r.volume()).sum();
    assert_eq!(total, Region::full(b.params()).volume());
}

#[test]
fn ratio_and_difference_extremes() {
    let b = pregnancy();
    let yes = Assignment::from_names(&b, &[("Pregnancy", "yes")]).unwrap();
    let no = Assignment::from_names(&b, &[("Pregnancy", "no")]).unwrap();
    let e = Assignment::from_names(&b, &[("UrineTest", "neg"), ("BloodTest", "neg")]).unwrap();
    let cfg = PartitionConfig::default();
    let all = |q: Query, l: RegionLabel| {
        let p = partition_query(&b, &q, None, &cfg).unwrap();
        assert_eq!(p.regions.len(), 1, "{:?}", q.kind);
        assert_eq!(p.regions[0].1, l);
    };
    all(Query::ratio(yes.clone(), no.clone(), e.clone(), Comparison::Ge, ratio(0, 1)).unwrap(), RegionLabel::Accepting);
    all(Query::ratio(yes.clone(), yes.clone(), e.clone(), Comparison::Ge, ratio(1, 1)).unwrap(), RegionLabel::Accepting);
    all(Query::difference(yes.clone(), no.clone(), e.clone(), Comparison::Ge, ratio(1, 1)).unwrap(), RegionLabel::Rejecting);
    all(Query::difference(yes, no, e, Comparison::Ge, ratio(-1, 1)).unwrap(), RegionLabel::Accepting);
}
