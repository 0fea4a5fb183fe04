//! Parameter lifting: sound bounds on reachability over parameter boxes,
//! region verification and approximate partitioning of parameter space.

mod lift;
mod partition;
mod verify;

pub use lift::{lift_bounds, BoundPair, Lifter, Objective};
pub use partition::{
    difference_partition, partition, partition_query, ratio_partition, PartitionConfig,
    RegionPartition,
};
pub use verify::{label, region_wellformed, verify_region, RegionLabel, Verifier};

#[cfg(test)]
mod tests;
