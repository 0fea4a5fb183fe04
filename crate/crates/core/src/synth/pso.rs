use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{certify, TuningResult};
use crate::algebra::{f64_to_rat, rat_to_f64, CompiledPoly, CompiledRational, Instantiation};
use crate::bn::{Pbn, Query};
use crate::error::Result;
use crate::pmc::{query_functions, Mode};

/// Particle swarm settings (constriction form).
#[derive(Clone, Debug, PartialEq)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        PsoConfig {
            swarm_size: 40,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            max_iters: 1000,
            seed: 0,
        }
    }
}

struct Particle {
    rng: ChaCha8Rng,
    x: Vec<f64>,
    v: Vec<f64>,
    best_x: Vec<f64>,
    best: f64,
}

/// Searches for an instantiation satisfying `q`. The first candidate whose
/// exact re-evaluation satisfies the constraint is returned; `None` when the
/// iteration budget runs out.
pub fn feasibility_pso(b: &Pbn, q: &Query, cfg: &PsoConfig) -> Result<Option<TuningResult>> {
    assert!(cfg.swarm_size >= 2, "swarm needs at least two particles");
    let fs = query_functions(b, q, Mode::EvidenceTailored)?;
    let compiled: Vec<CompiledRational> = fs.iter().map(|f| f.compile()).collect();
    let entries: Vec<CompiledPoly> = b
        .cpts()
        .iter()
        .flat_map(|c| c.rows.iter().flatten())
        .filter(|e| !e.is_constant())
        .map(|e| e.compile())
        .collect();
    let bounds: Vec<(f64, f64)> = b
        .params()
        .iter()
        .map(|p| (rat_to_f64(&p.lower), rat_to_f64(&p.upper)))
        .collect();
    let wellformed = |x: &[f64]| entries.iter().all(|e| (0.0..=1.0).contains(&e.eval(x)));
    let margin = |x: &[f64]| {
        let vals: Vec<f64> = compiled.iter().map(|f| f.eval(x)).collect();
        let m = q.margin_f64(vals[0], vals.get(1).copied());
        if m.is_finite() {
            m
        } else {
            f64::NEG_INFINITY
        }
    };
    let try_certify = |x: &[f64]| -> Result<Option<TuningResult>> {
        let values = x.iter().map(|&v| f64_to_rat(v)).collect();
        let Ok(u) = Instantiation::new(b.params(), values) else {
            return Ok(None);
        };
        if b.instantiate(&u).is_err() {
            return Ok(None);
        }
        let Ok(cert) = certify(q, &fs, &u) else {
            return Ok(None);
        };
        Ok(cert.satisfied.then(|| TuningResult::new(q, u, cert, None)))
    };
    let sample = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        for _ in 0..1000 {
            let x: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
            if wellformed(&x) {
                return x;
            }
        }
        bounds.iter().map(|&(lo, _)| lo).collect()
    };

    let mut swarm: Vec<Particle> = (0..cfg.swarm_size)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let x = sample(&mut rng);
            let v = bounds
                .iter()
                .map(|&(lo, hi)| rng.gen_range(-1.0..=1.0) * (hi - lo) * 0.1)
                .collect();
            Particle { rng, best_x: x.clone(), x, v, best: f64::NEG_INFINITY }
        })
        .collect();
    let mut global_x = swarm[0].x.clone();
    let mut global = f64::NEG_INFINITY;

    for _ in 0..cfg.max_iters {
        for p in swarm.iter_mut() {
            let m = margin(&p.x);
            if m >= 0.0 {
                if let Some(r) = try_certify(&p.x)? {
                    return Ok(Some(r));
                }
            }
            if m > p.best {
                p.best = m;
                p.best_x = p.x.clone();
            }
            if m > global {
                global = m;
                global_x = p.x.clone();
            }
        }
        for p in swarm.iter_mut() {
            for d in 0..bounds.len() {
                let r1: f64 = p.rng.gen();
                let r2: f64 = p.rng.gen();
                p.v[d] = cfg.inertia * p.v[d]
                    + cfg.cognitive * r1 * (p.best_x[d] - p.x[d])
                    + cfg.social * r2 * (global_x[d] - p.x[d]);
                p.x[d] = (p.x[d] + p.v[d]).clamp(bounds[d].0, bounds[d].1);
            }
            if !wellformed(&p.x) {
                p.x = sample(&mut p.rng);
            }
        }
    }
    Ok(None)
}
