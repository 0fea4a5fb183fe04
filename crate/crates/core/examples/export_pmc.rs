//! Builds the plain and the evidence-tailored chain of the pregnancy network
//! and prints them in explicit form.

use pbnsynth::io::{explicit_pmc_string, parse_pbif, parse_query, read_explicit_pmc};
use pbnsynth::transform::{build_pmc, build_query_pmc};

fn main() -> pbnsynth::Result<()> {
    let b = parse_pbif(include_str!("../models/pregnancy.pbif"))?;
    let order = b.topological_order()?;
    let plain = build_pmc(&b, &order)?;
    println!("{}", explicit_pmc_string(&plain));

    let q = parse_query(&b, "P(Pregnancy=yes | UrineTest=neg, BloodTest=neg) <= 0.2")?;
    let tailored = build_query_pmc(&b, &order, &q.hypothesis, &q.evidence)?;
    let text = explicit_pmc_string(&tailored);
    println!("{text}");
    let back = read_explicit_pmc(&text)?;
    println!("re-read {} of {} states", back.num_states(), tailored.num_states());
    Ok(())
}
