use num_traits::{ToPrimitive, Zero};

use super::{cd_distance, certify, feasibility_pso, PsoConfig, TuningResult};
use crate::algebra::{rat_to_f64, ratio, Instantiation, ParamId, Rational, Region};
use crate::bn::{Pbn, Query};
use crate::error::{Error, Result};
use crate::pla::{partition_query, PartitionConfig, RegionLabel};
use crate::pmc::{query_functions, Mode};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Metric {
    /// Euclidean distance in parameter space.
    #[default]
    Euclidean,
    /// [`cd_distance`] between the instantiated joints.
    Cd,
}

#[derive(Clone, Debug, Default)]
pub struct MinimalChangeConfig {
    pub metric: Metric,
    pub partition: PartitionConfig,
    /// Parameters allowed to move; the rest stay at their original values.
    /// `None` frees all of them.
    pub free: Option<Vec<ParamId>>,
}

/// Grid spacing used when searching accepting boxes under [`Metric::Cd`].
const CD_GRID: (i64, i64) = (1, 100);
/// Grid points per box are capped; the spacing doubles until the cap holds.
const CD_GRID_CAP: usize = 4096;

/// Closest instantiation to `u0` (under `cfg.metric`) found in the accepting
/// boxes of a partition at the configured coverage.
pub fn minimal_change_tuning(b: &Pbn, q: &Query, u0: &Instantiation, cfg: &MinimalChangeConfig) -> Result<TuningResult> {
    b.instantiate(u0)?;
    let free: Vec<ParamId> = match &cfg.free {
        Some(f) => {
            let mut f = f.clone();
            f.sort();
            f.dedup();
            f
        }
        None => b.params().ids().collect(),
    };
    let fixed: Vec<(ParamId, Rational)> = b
        .params()
        .ids()
        .filter(|id| !free.contains(id))
        .map(|id| (id, u0.get(id).clone()))
        .collect();
    let reduced = b.fix_parameters(&fixed)?;
    let part = partition_query(&reduced, q, None, &cfg.partition)?;

    let lift = |x: &[Rational]| -> Vec<Rational> {
        let mut full = u0.values().to_vec();
        for (id, v) in free.iter().zip(x) {
            full[id.0] = v.clone();
        }
        full
    };
    let origin: Vec<Rational> = free.iter().map(|id| u0.get(*id).clone()).collect();
    let mut best: Option<(Vec<Rational>, f64, Rational)> = None;
    for r in part.accepting() {
        match cfg.metric {
            Metric::Euclidean => {
                let x = r.clamp(&origin);
                let d2: Rational = x
                    .iter()
                    .zip(&origin)
                    .map(|(a, o)| (a - o) * (a - o))
                    .sum();
                if best.as_ref().map_or(true, |(_, _, b2)| d2 < *b2) {
                    let d = rat_to_f64(&d2).sqrt();
                    best = Some((lift(&x), d, d2));
                }
            }
            Metric::Cd => {
                let mut points = grid(r);
                points.push(r.clamp(&origin));
                for x in points {
                    let u = Instantiation::new(b.params(), lift(&x))?;
                    let d = cd_distance(b, &u, u0)?;
                    if best.as_ref().map_or(true, |(_, bd, _)| d < *bd) {
                        best = Some((lift(&x), d, Rational::zero()));
                    }
                }
            }
        }
    }
    let Some((x, d, _)) = best else {
        return Err(Error::NoAcceptingRegion(rat_to_f64(&cfg.partition.coverage)));
    };
    let u = Instantiation::new(b.params(), x)?;
    let fs = query_functions(b, q, Mode::EvidenceTailored)?;
    let cert = certify(q, &fs, &u)?;
    Ok(TuningResult::new(q, u, cert, Some(d)))
}

/// Multiples of the grid spacing inside `r`, per dimension.
fn grid(r: &Region) -> Vec<Vec<Rational>> {
    let mut step = ratio(CD_GRID.0, CD_GRID.1);
    loop {
        let axes: Vec<Vec<Rational>> = r
            .intervals()
            .iter()
            .map(|iv| {
                let first = (&iv.lo / &step).ceil().to_integer();
                let last = (&iv.hi / &step).floor().to_integer();
                let mut k = first;
                let mut out = Vec::new();
                while k <= last {
                    out.push(Rational::from_integer(k.clone()) * &step);
                    k += 1;
                }
                out
            })
            .collect();
        let n = axes
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.len().max(1)));
        if n.is_some_and(|n| n <= CD_GRID_CAP) {
            return product(&axes);
        }
        step = step * Rational::from_integer(2.into());
        if step.to_f64().is_some_and(|s| s > 1e6) {
            return Vec::new();
        }
    }
}

fn product(axes: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if axes.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    for a in axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                a.iter().map(move |x| {
                    let mut p = p.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Any instantiation satisfying `q`: particle swarm first, then the centre of
/// the largest accepting box of a partition at coverage 0.9.
pub fn simple_tuning(b: &Pbn, q: &Query, pso: &PsoConfig) -> Result<Option<TuningResult>> {
    if let Some(r) = feasibility_pso(b, q, pso)? {
        return Ok(Some(r));
    }
    let part = partition_query(b, q, None, &PartitionConfig::with_coverage(ratio(9, 10)))?;
    let best = part
        .regions
        .iter()
        .filter(|(_, l)| *l == RegionLabel::Accepting)
        .max_by(|(a, _), (c, _)| a.volume().cmp(&c.volume()).then_with(|| c.cmp(a)));
    let Some((r, _)) = best else {
        return Ok(None);
    };
    let u = Instantiation::new(b.params(), r.center())?;
    let fs = query_functions(b, q, Mode::EvidenceTailored)?;
    let cert = certify(q, &fs, &u)?;
    Ok(cert.satisfied.then(|| TuningResult::new(q, u, cert, None)))
}
