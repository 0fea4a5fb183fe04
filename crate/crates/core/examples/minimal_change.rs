//! Minimal-change tuning of the pregnancy network: one-way on p, on q, and
//! two-way, then with the CD distance.

use pbnsynth::algebra::{ratio, ParamId};
use pbnsynth::io::{parse_instantiation, parse_pbif, parse_query};
use pbnsynth::pla::PartitionConfig;
use pbnsynth::synth::{minimal_change_tuning, Metric, MinimalChangeConfig};

fn main() -> pbnsynth::Result<()> {
    let b = parse_pbif(include_str!("../models/pregnancy.pbif"))?;
    let q = parse_query(&b, "P(Pregnancy=yes | UrineTest=neg, BloodTest=neg) <= 0.2")?;
    let u0 = parse_instantiation(&b, "p=0.36,q=0.27")?;
    let fine = PartitionConfig::with_coverage(ratio(1, 1) - ratio(1, 10_000_000_000));

    let runs = [
        ("p only", Metric::Euclidean, Some(vec![ParamId(0)]), fine.clone()),
        ("q only", Metric::Euclidean, Some(vec![ParamId(1)]), fine),
        ("both", Metric::Euclidean, None, PartitionConfig::default()),
        ("both, cd", Metric::Cd, None, PartitionConfig::default()),
    ];
    for (what, metric, free, partition) in runs {
        let r = minimal_change_tuning(&b, &q, &u0, &MinimalChangeConfig { metric, partition, free })?;
        println!(
            "{what:>9}: {} distance {:.6}",
            r.instantiation,
            r.distance.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
