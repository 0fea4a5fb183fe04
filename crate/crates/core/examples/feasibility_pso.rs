//! Particle swarm search for a point satisfying a threshold constraint.

use pbnsynth::io::{parse_pbif, parse_query};
use pbnsynth::synth::{feasibility_pso, PsoConfig};

fn main() -> pbnsynth::Result<()> {
    let b = parse_pbif(include_str!("../models/pregnancy.pbif"))?;
    for src in [
        "P(Pregnancy=yes | UrineTest=neg, BloodTest=neg) <= 0.2",
        "P(Pregnancy=yes | UrineTest=neg, BloodTest=neg) <= 0",
    ] {
        let q = parse_query(&b, src)?;
        match feasibility_pso(&b, &q, &PsoConfig::default())? {
            Some(r) => println!("{src}: {} certified={}", r.instantiation, r.certificate.satisfied),
            None => println!("{src}: infeasible"),
        }
    }
    Ok(())
}
