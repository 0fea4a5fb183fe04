use num_traits::{One, Zero};

use crate::algebra::{rat_to_f64, Instantiation, Rational};
use crate::bn::Pbn;
use crate::error::Result;

/// `ln max_w P'(w)/P(w) - ln min_w P'(w)/P(w)` over all joint outcomes `w`,
/// with `P = B[u0]` and `P' = B[u]`. `0/0` counts as 1; any other ratio
/// involving a zero makes the distance infinite.
pub fn cd_distance(b: &Pbn, u: &Instantiation, u0: &Instantiation) -> Result<f64> {
    let p = b.instantiate(u0)?.joint_distribution()?;
    let p2 = b.instantiate(u)?.joint_distribution()?;
    let mut hi: Option<Rational> = None;
    let mut lo: Option<Rational> = None;
    for (a, c) in p.iter().zip(&p2) {
        let r = match (a.is_zero(), c.is_zero()) {
            (true, true) => Rational::one(),
            (true, false) | (false, true) => return Ok(f64::INFINITY),
            _ => c / a,
        };
        if hi.as_ref().map_or(true, |h| &r > h) {
            hi = Some(r.clone());
        }
        if lo.as_ref().map_or(true, |l| &r < l) {
            lo = Some(r);
        }
    }
    match (hi, lo) {
        (Some(h), Some(l)) => Ok(rat_to_f64(&(h / l - Rational::one())).ln_1p()),
        _ => Ok(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;
    use crate::bn::testing::pregnancy;

    #[test]
    fn pregnancy_distance() {
        let b = pregnancy();
        let u0 = Instantiation::new(b.params(), vec![ratio(36, 100), ratio(27, 100)]).unwrap();
        let u = Instantiation::new(b.params(), vec![ratio(18, 100), ratio(27, 100)]).unwrap();
        assert_eq!(cd_distance(&b, &u0, &u0).unwrap(), 0.0);
        let d = cd_distance(&b, &u, &u0).unwrap();
        assert!((d - ((0.82f64 / 0.64).ln() - 0.5f64.ln())).abs() < 1e-12);
        assert!((d - 0.940983).abs() < 1e-6);
        assert_eq!(cd_distance(&b, &u0, &u).unwrap(), d);
    }
}
