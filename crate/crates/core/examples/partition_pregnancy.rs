//! Approximate partition of [0.001, 0.999]^2 for "P(yes | neg, neg) <= 0.2",
//! written as JSON and SVG next to the working directory.

use std::time::Instant;

use pbnsynth::algebra::{rat_to_f64, ratio};
use pbnsynth::cli::render_svg;
use pbnsynth::io::{parse_pbif, parse_query};
use pbnsynth::pla::{partition_query, PartitionConfig, RegionLabel};

fn main() -> pbnsynth::Result<()> {
    let b = parse_pbif(include_str!("../models/pregnancy.pbif"))?;
    let q = parse_query(&b, "P(Pregnancy=yes | UrineTest=neg, BloodTest=neg) <= 0.2")?;
    for c in [ratio(9, 10), ratio(99, 100)] {
        let t = Instant::now();
        let p = partition_query(&b, &q, None, &PartitionConfig::with_coverage(c))?;
        println!(
            "coverage {:.2}: {} regions, accepting {:.4}, rejecting {:.4} ({:?})",
            rat_to_f64(&p.coverage_requested),
            p.regions.len(),
            rat_to_f64(&p.fraction(RegionLabel::Accepting)),
            rat_to_f64(&p.fraction(RegionLabel::Rejecting)),
            t.elapsed()
        );
        if p.coverage_requested == ratio(99, 100) {
            std::fs::write("pregnancy_partition.svg", render_svg(&b, &p)?)?;
            println!("wrote pregnancy_partition.svg");
        }
    }
    Ok(())
}
