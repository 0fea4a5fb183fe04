//! Sensitivity functions on asia with one parameter per CPT row, adding the
//! parameters one at a time.

use std::time::Instant;

use pbnsynth::algebra::ParamId;
use pbnsynth::io::{parse_instantiation, parse_pbif, parse_query};
use pbnsynth::pmc::sensitivity_function;

const ORIGINAL: &str = "a1=0.01,t1=0.05,t2=0.01,s1=0.5,l1=0.1,l2=0.01,b1=0.6,b2=0.3,\
    x1=0.98,x2=0.05,d1=0.9,d2=0.7,d3=0.8,d4=0.1";

fn main() -> pbnsynth::Result<()> {
    let b = parse_pbif(include_str!("../models/asia14.pbif"))?;
    let u0 = parse_instantiation(&b, ORIGINAL)?;
    let n = b.nparams();
    for k in 0..=n {
        let fixed: Vec<_> = (k..n).map(|i| (ParamId(i), u0.values()[i].clone())).collect();
        let bk = b.fix_parameters(&fixed)?;
        let q = parse_query(&bk, "P(lung=yes | xray=yes, dysp=yes) >= 0.5")?;
        let t = Instant::now();
        let f = sensitivity_function(&bk, &q)?;
        println!(
            "{k:>2} parameters: {:>4} + {:>4} terms, {:?}",
            f.numerator().num_terms(),
            f.denominator().num_terms(),
            t.elapsed()
        );
    }
    Ok(())
}
