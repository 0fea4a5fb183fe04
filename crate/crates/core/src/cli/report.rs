use serde_json::{json, Map, Value};

use crate::algebra::{fmt_rat, rat_to_f64, Instantiation, RationalFunction};
use crate::bn::{Pbn, Query};
use crate::pla::{RegionLabel, RegionPartition};
use crate::synth::TuningResult;

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

pub fn function_json(b: &Pbn, q: &Query, f: &RationalFunction) -> String {
    let names = b.params().names();
    pretty(&json!({
        "query": q.render(b),
        "parameters": names,
        "numerator": f.numerator().render(&names),
        "denominator": f.denominator().render(&names),
        "function": f.render(&names),
    }))
}

pub fn partition_json(b: &Pbn, p: &RegionPartition) -> String {
    let names = b.params().names();
    let regions: Vec<Value> = p
        .regions
        .iter()
        .map(|(r, l)| {
            let bounds: Map<String, Value> = names
                .iter()
                .zip(r.intervals())
                .map(|(n, iv)| (n.to_string(), json!([rat_to_f64(&iv.lo), rat_to_f64(&iv.hi)])))
                .collect();
            json!({ "bounds": bounds, "label": l.as_str() })
        })
        .collect();
    pretty(&json!({
        "constraint": p.query.render(b),
        "coverage_requested": rat_to_f64(&p.coverage_requested),
        "coverage_achieved": rat_to_f64(&p.coverage_achieved),
        "regions_checked": p.regions_checked,
        "partial": p.partial,
        "regions": regions,
    }))
}

pub fn partition_summary(p: &RegionPartition) -> String {
    format!(
        "{} regions ({} accepting, {} rejecting, {} unknown), coverage {:.6}{}",
        p.regions.len(),
        p.count(RegionLabel::Accepting),
        p.count(RegionLabel::Rejecting),
        p.count(RegionLabel::Unknown),
        rat_to_f64(&p.coverage_achieved),
        if p.partial { " (partial)" } else { "" }
    )
}

fn point(b: &Pbn, u: &Instantiation) -> (Map<String, Value>, Map<String, Value>) {
    let mut approx = Map::new();
    let mut exact = Map::new();
    for (p, v) in b.params().iter().zip(u.values()) {
        approx.insert(p.name.clone(), json!(rat_to_f64(v)));
        exact.insert(p.name.clone(), json!(fmt_rat(v)));
    }
    (approx, exact)
}

pub fn tuning_json(b: &Pbn, q: &Query, r: Option<&TuningResult>) -> String {
    let Some(r) = r else {
        return pretty(&json!({ "result": "infeasible", "constraint": q.render(b) }));
    };
    let (approx, exact) = point(b, &r.instantiation);
    pretty(&json!({
        "result": "feasible",
        "constraint": q.render(b),
        "instantiation": approx,
        "instantiation_exact": exact,
        "achieved_value": r.achieved_value.as_ref().map(rat_to_f64),
        "distance": r.distance,
        "certificate": {
            "conditionals": r.certificate.conditionals.iter().map(fmt_rat).collect::<Vec<_>>(),
            "satisfied": r.certificate.satisfied,
        },
    }))
}
