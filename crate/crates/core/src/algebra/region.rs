use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::param::{fmt_rat, ratio, rat_to_f64, Instantiation, ParamId, ParameterSet, Rational};
use crate::error::{Error, Result};

/// Largest parameter subset whose corners [`Region::vertices`] will enumerate.
pub const MAX_VERTEX_PARAMS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) * ratio(1, 2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Axis-aligned box, one closed interval per parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    intervals: Vec<Interval>,
}

impl Region {
    pub fn new(params: &ParameterSet, intervals: Vec<Interval>) -> Result<Self> {
        if intervals.len() != params.len() {
            return Err(Error::ParameterMismatch {
                left: params.len(),
                right: intervals.len(),
            });
        }
        for (p, iv) in params.iter().zip(&intervals) {
            if iv.lo > iv.hi {
                return Err(Error::InvalidRegion(format!(
                    "empty interval [{}, {}] for `{}`",
                    fmt_rat(&iv.lo),
                    fmt_rat(&iv.hi),
                    p.name
                )));
            }
            if iv.lo < p.lower || iv.hi > p.upper {
                return Err(Error::InvalidRegion(format!(
                    "interval [{}, {}] for `{}` leaves the parameter bounds",
                    fmt_rat(&iv.lo),
                    fmt_rat(&iv.hi),
                    p.name
                )));
            }
        }
        Ok(Region { intervals })
    }

    /// The whole parameter space.
    pub fn full(params: &ParameterSet) -> Self {
        Region {
            intervals: params
                .iter()
                .map(|p| Interval::new(p.lower.clone(), p.upper.clone()))
                .collect(),
        }
    }

    /// Degenerate box containing exactly `u`.
    pub fn point(u: &Instantiation) -> Self {
        Region {
            intervals: u
                .values()
                .iter()
                .map(|v| Interval::new(v.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval(&self, id: ParamId) -> &Interval {
        &self.intervals[id.0]
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn volume(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::one(), |acc, iv| acc * iv.width())
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.intervals.len()
            && self.intervals.iter().zip(point).all(|(iv, x)| iv.contains(x))
    }

    pub fn center(&self) -> Vec<Rational> {
        self.intervals.iter().map(Interval::mid).collect()
    }

    /// Closest point of the box to `point` (coordinate-wise clamping).
    pub fn clamp(&self, point: &[Rational]) -> Vec<Rational> {
        self.intervals
            .iter()
            .zip(point)
            .map(|(iv, x)| {
                if x < &iv.lo {
                    iv.lo.clone()
                } else if x > &iv.hi {
                    iv.hi.clone()
                } else {
                    x.clone()
                }
            })
            .collect()
    }

    /// All corners over `subset`, lower endpoint first, first listed parameter
    /// varying slowest.
    pub fn vertices(&self, subset: &[ParamId]) -> Result<Vec<Vec<(ParamId, Rational)>>> {
        if subset.len() > MAX_VERTEX_PARAMS {
            return Err(Error::TooManyVertices(subset.len()));
        }
        let n = subset.len();
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            let corner = subset
                .iter()
                .enumerate()
                .map(|(k, &id)| {
                    let iv = &self.intervals[id.0];
                    let bit = (mask >> (n - 1 - k)) & 1;
                    (id, if bit == 0 { iv.lo.clone() } else { iv.hi.clone() })
                })
                .collect();
            out.push(corner);
        }
        Ok(out)
    }

    /// Bisects the dimension that is widest relative to its global bounds;
    /// ties go to the lowest parameter index.
    pub fn split(&self, params: &ParameterSet) -> (Region, Region) {
        let mut best: Option<(usize, Rational)> = None;
        for (i, (iv, p)) in self.intervals.iter().zip(params.iter()).enumerate() {
            let rel = iv.width() / p.width();
            if best.as_ref().map_or(true, |(_, b)| rel > *b) {
                best = Some((i, rel));
            }
        }
        let (dim, _) = best.expect("split of a zero-dimensional region");
        let mid = self.intervals[dim].mid();
        let mut left = self.clone();
        let mut right = self.clone();
        left.intervals[dim].hi = mid.clone();
        right.intervals[dim].lo = mid;
        (left, right)
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.intervals
            .iter()
            .map(|iv| (rat_to_f64(&iv.lo), rat_to_f64(&iv.hi)))
            .collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.intervals.iter().any(|iv| iv.width().is_zero())
    }
}

impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.intervals.iter().zip(&other.intervals) {
            let o = a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.intervals.len().cmp(&other.intervals.len())
    }
}

impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::param::Parameter;

    fn unit_params(n: usize) -> ParameterSet {
        ParameterSet::new(
            (0..n)
                .map(|i| Parameter::new(format!("x{}", i + 1), ratio(0, 1), ratio(1, 1)).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn region(params: &ParameterSet, b: &[(i64, i64, i64)]) -> Region {
        Region::new(
            params,
            b.iter()
                .map(|&(lo, hi, d)| Interval::new(ratio(lo, d), ratio(hi, d)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn vertices_of_unit_interval() {
        let ps = unit_params(1);
        let r = Region::full(&ps);
        let v = r.vertices(&[ParamId(0)]).unwrap();
        assert_eq!(v, vec![vec![(ParamId(0), ratio(0, 1))], vec![(ParamId(0), ratio(1, 1))]]);
    }

    #[test]
    fn vertices_of_square() {
        let ps = unit_params(2);
        let r = region(&ps, &[(1, 3, 10), (1, 3, 10)]);
        let v = r.vertices(&[ParamId(0), ParamId(1)]).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v[1], vec![(ParamId(0), ratio(1, 10)), (ParamId(1), ratio(3, 10))]);
    }

    #[test]
    fn vertex_guard() {
        let ps = unit_params(21);
        let ids: Vec<_> = ps.ids().collect();
        assert!(matches!(
            Region::full(&ps).vertices(&ids),
            Err(Error::TooManyVertices(21))
        ));
    }

    #[test]
    fn split_widest_dimension() {
        let ps = unit_params(2);
        let r = region(&ps, &[(0, 2, 2), (0, 1, 2)]);
        let (a, b) = r.split(&ps);
        assert_eq!(a, region(&ps, &[(0, 1, 2), (0, 1, 2)]));
        assert_eq!(b, region(&ps, &[(1, 2, 2), (0, 1, 2)]));
    }

    #[test]
    fn split_tie_takes_lowest_index() {
        let ps = unit_params(2);
        let (a, _) = Region::full(&ps).split(&ps);
        assert_eq!(a.interval(ParamId(0)).hi, ratio(1, 2));
        assert_eq!(a.interval(ParamId(1)).hi, ratio(1, 1));
    }

    #[test]
    fn split_one_dimensional() {
        let ps = unit_params(1);
        let r = region(&ps, &[(2, 3, 10)]);
        let (a, b) = r.split(&ps);
        assert_eq!(a, region(&ps, &[(20, 25, 100)]));
        assert_eq!(b, region(&ps, &[(25, 30, 100)]));
    }

    #[test]
    fn region_must_fit_parameter_bounds() {
        let ps = unit_params(1);
        assert!(Region::new(&ps, vec![Interval::new(ratio(1, 2), ratio(3, 2))]).is_err());
        assert!(Region::new(&ps, vec![Interval::new(ratio(1, 2), ratio(1, 4))]).is_err());
    }
}
