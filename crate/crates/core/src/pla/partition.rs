use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::verify::{region_wellformed, RegionLabel, Verifier};
use crate::algebra::{fmt_rat, ratio, Rational, Region};
use crate::bn::{Pbn, Query, QueryKind};
use crate::error::{Error, Result};

/// Regions verified together; fixed so that results do not depend on the
/// number of worker threads.
const BATCH: usize = 64;

#[derive(Clone, Debug)]
pub struct PartitionConfig {
    pub coverage: Rational,
    pub max_regions: usize,
    pub threads: usize,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig { coverage: ratio(99, 100), max_regions: 1_000_000, threads: 1 }
    }
}

impl PartitionConfig {
    pub fn with_coverage(coverage: Rational) -> Self {
        PartitionConfig { coverage, ..Default::default() }
    }
}

/// A box cut into labelled sub-boxes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPartition {
    pub query: Query,
    pub domain: Region,
    /// Sorted by [`Region`]'s ordering; interiors are disjoint and the union
    /// is the domain.
    pub regions: Vec<(Region, RegionLabel)>,
    pub coverage_requested: Rational,
    pub coverage_achieved: Rational,
    /// Number of region verifications performed.
    pub regions_checked: usize,
    /// The budget ran out before the requested coverage was reached.
    pub partial: bool,
}

impl RegionPartition {
    /// Share of the domain's volume carrying `label`.
    pub fn fraction(&self, label: RegionLabel) -> Rational {
        let total = self.domain.volume();
        if total.is_zero() {
            let hit = self.regions.iter().any(|(_, l)| *l == label);
            return if hit { Rational::one() } else { Rational::zero() };
        }
        let v: Rational = self
            .regions
            .iter()
            .filter(|(_, l)| *l == label)
            .map(|(r, _)| r.volume())
            .sum();
        v / total
    }

    pub fn count(&self, label: RegionLabel) -> usize {
        self.regions.iter().filter(|(_, l)| *l == label).count()
    }

    pub fn accepting(&self) -> impl Iterator<Item = &Region> {
        self.regions
            .iter()
            .filter(|(_, l)| *l == RegionLabel::Accepting)
            .map(|(r, _)| r)
    }
}

#[derive(PartialEq, Eq)]
struct Entry {
    volume: Rational,
    region: Region,
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.volume
            .cmp(&other.volume)
            .then_with(|| other.region.cmp(&self.region))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Refines `domain` until the decided share reaches the requested coverage
/// or `max_regions` verifications have been spent.
pub fn partition(v: &Verifier, domain: &Region, cfg: &PartitionConfig) -> Result<RegionPartition> {
    if cfg.coverage <= Rational::zero() || cfg.coverage > Rational::one() {
        return Err(Error::InvalidRegion(format!(
            "coverage {} outside (0, 1]",
            fmt_rat(&cfg.coverage)
        )));
    }
    let pool = if cfg.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .map_err(|e| Error::InvalidModel(format!("cannot start worker pool: {e}")))?,
        )
    } else {
        None
    };
    let check = |batch: &[Region]| -> Vec<Result<RegionLabel>> {
        match &pool {
            Some(p) => p.install(|| batch.par_iter().map(|r| v.verify(r)).collect()),
            None => batch.iter().map(|r| v.verify(r)).collect(),
        }
    };
    let total = domain.volume();
    let mut out = RegionPartition {
        query: v.query().clone(),
        domain: domain.clone(),
        regions: Vec::new(),
        coverage_requested: cfg.coverage.clone(),
        coverage_achieved: Rational::zero(),
        regions_checked: 0,
        partial: false,
    };
    if total.is_zero() || domain.dim() == 0 {
        let l = check(std::slice::from_ref(domain)).pop().expect("one result")?;
        out.regions_checked = 1;
        out.regions.push((domain.clone(), l));
        if l != RegionLabel::Unknown {
            out.coverage_achieved = Rational::one();
        }
        out.partial = out.coverage_achieved < cfg.coverage;
        return Ok(out);
    }
    let mut heap = BinaryHeap::new();
    heap.push(Entry { volume: total.clone(), region: domain.clone() });
    let mut decided = Rational::zero();
    let target = &cfg.coverage * &total;
    'outer: while let Some(top) = heap.peek() {
        if decided >= target {
            break;
        }
        if out.regions_checked >= cfg.max_regions {
            break;
        }
        let vol = top.volume.clone();
        let room = cfg.max_regions - out.regions_checked;
        let mut batch = Vec::new();
        while batch.len() < BATCH.min(room) && heap.peek().is_some_and(|e| e.volume == vol) {
            batch.push(heap.pop().expect("peeked").region);
        }
        let labels = check(&batch);
        let mut rest = batch.into_iter().zip(labels);
        for (r, l) in rest.by_ref() {
            let l = l?;
            out.regions_checked += 1;
            match l {
                RegionLabel::Unknown => {
                    let (a, b) = r.split(v.params());
                    heap.push(Entry { volume: a.volume(), region: a });
                    heap.push(Entry { volume: b.volume(), region: b });
                }
                _ => {
                    decided += r.volume();
                    out.regions.push((r, l));
                }
            }
            if decided >= target {
                for (r, _) in rest {
                    heap.push(Entry { volume: r.volume(), region: r });
                }
                break 'outer;
            }
        }
    }
    out.regions
        .extend(heap.into_iter().map(|e| (e.region, RegionLabel::Unknown)));
    out.regions.sort();
    out.coverage_achieved = decided / total;
    out.partial = out.coverage_achieved < cfg.coverage;
    Ok(out)
}

/// Partitions `domain` (the whole parameter space by default) for any
/// probability, ratio or difference query.
pub fn partition_query(
    b: &Pbn,
    q: &Query,
    domain: Option<&Region>,
    cfg: &PartitionConfig,
) -> Result<RegionPartition> {
    let full = Region::full(b.params());
    let domain = domain.unwrap_or(&full);
    if !region_wellformed(b, domain)? {
        return Err(Error::RegionNotWellFormed(
            "some CPT entry leaves [0, 1] at a corner of the domain".into(),
        ));
    }
    partition(&Verifier::new(b, q)?, domain, cfg)
}

pub fn ratio_partition(b: &Pbn, q: &Query, domain: Option<&Region>, cfg: &PartitionConfig) -> Result<RegionPartition> {
    if q.kind != QueryKind::Ratio {
        return Err(Error::InvalidQuery("expected a ratio query".into()));
    }
    partition_query(b, q, domain, cfg)
}

pub fn difference_partition(
    b: &Pbn,
    q: &Query,
    domain: Option<&Region>,
    cfg: &PartitionConfig,
) -> Result<RegionPartition> {
    if q.kind != QueryKind::Difference {
        return Err(Error::InvalidQuery("expected a difference query".into()));
    }
    partition_query(b, q, domain, cfg)
}
