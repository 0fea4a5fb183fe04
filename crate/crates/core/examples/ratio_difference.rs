//! Ratio and difference constraints between two hypotheses.

use pbnsynth::algebra::{rat_to_f64, ratio};
use pbnsynth::io::{parse_pbif, parse_query};
use pbnsynth::pla::{partition_query, PartitionConfig, RegionLabel};

fn main() -> pbnsynth::Result<()> {
    let b = parse_pbif(include_str!("../models/pregnancy.pbif"))?;
    for src in [
        "RATIO(Pregnancy=yes : Pregnancy=no | UrineTest=neg, BloodTest=neg) >= 1",
        "DIFF(Pregnancy=yes - Pregnancy=no | UrineTest=neg, BloodTest=neg) >= 0",
    ] {
        let q = parse_query(&b, src)?;
        let p = partition_query(&b, &q, None, &PartitionConfig::with_coverage(ratio(99, 100)))?;
        println!(
            "{src}\n  accepting {:.4}, rejecting {:.4}, {} regions",
            rat_to_f64(&p.fraction(RegionLabel::Accepting)),
            rat_to_f64(&p.fraction(RegionLabel::Rejecting)),
            p.regions.len()
        );
    }
    Ok(())
}
