use num_traits::{One, Zero};

use super::param::{ParamId, Rational};
use super::poly::{CompiledPoly, Polynomial};
use crate::error::{Error, Result};

/// Quotient of two polynomials.
///
/// Only constant content is normalized: a constant denominator is folded into
/// the numerator, otherwise the denominator is made monic. There is no GCD
/// cancellation, so equality of functions goes through [`RationalFunction::equivalent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.nvars() != den.nvars() {
            return Err(Error::ParameterMismatch {
                left: num.nvars(),
                right: den.nvars(),
            });
        }
        Ok(RationalFunction { num, den }.normalized())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let n = p.nvars();
        RationalFunction {
            num: p,
            den: Polynomial::one(n),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        RationalFunction::from_poly(Polynomial::constant(nvars, c))
    }

    pub fn zero(nvars: usize) -> Self {
        RationalFunction::from_poly(Polynomial::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        RationalFunction::from_poly(Polynomial::one(nvars))
    }

    fn normalized(mut self) -> Self {
        let n = self.num.nvars();
        if self.num.is_zero() {
            self.den = Polynomial::one(n);
            return self;
        }
        if self.num == self.den {
            return RationalFunction::one(n);
        }
        if let Some(c) = self.den.constant_value() {
            if !c.is_one() {
                self.num = self.num.scale(&c.recip());
                self.den = Polynomial::one(n);
            }
            return self;
        }
        let lc = self.den.leading_coefficient().cloned().expect("nonzero");
        if !lc.is_one() {
            let inv = lc.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        self
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn try_add(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if self.den == other.den {
            return RationalFunction::new(self.num.try_add(&other.num)?, self.den.clone());
        }
        let num = self
            .num
            .try_mul(&other.den)?
            .try_add(&other.num.try_mul(&self.den)?)?;
        RationalFunction::new(num, self.den.try_mul(&other.den)?)
    }

    pub fn try_sub(&self, other: &RationalFunction) -> Result<RationalFunction> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if self.is_zero() || other.is_zero() {
            return Ok(RationalFunction::zero(self.nvars()));
        }
        if self.den == other.num {
            return RationalFunction::new(self.num.clone(), other.den.clone());
        }
        if self.num == other.den {
            return RationalFunction::new(other.num.clone(), self.den.clone());
        }
        RationalFunction::new(self.num.try_mul(&other.num)?, self.den.try_mul(&other.den)?)
    }

    pub fn try_div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        self.try_mul(&other.recip()?)
    }

    pub fn recip(&self) -> Result<RationalFunction> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// `1 - self`.
    pub fn complement(&self) -> RationalFunction {
        RationalFunction::one(self.nvars())
            .try_sub(self)
            .expect("same parameter list")
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    /// Same function, tested by cross-multiplication.
    pub fn equivalent(&self, other: &RationalFunction) -> bool {
        match (self.num.try_mul(&other.den), other.num.try_mul(&self.den)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Partial derivative by the quotient rule.
    pub fn diff(&self, x: ParamId) -> RationalFunction {
        if self.is_polynomial() {
            return RationalFunction::from_poly(self.num.diff(x));
        }
        let num = &(&self.num.diff(x) * &self.den) - &(&self.num * &self.den.diff(x));
        RationalFunction::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn variables(&self) -> Vec<ParamId> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v.sort();
        v.dedup();
        v
    }

    pub fn substitute(
        &self,
        fixed: &[(ParamId, Rational)],
        keep: &[Option<usize>],
        new_nvars: usize,
    ) -> Result<RationalFunction> {
        RationalFunction::new(
            self.num.substitute(fixed, keep, new_nvars),
            self.den.substitute(fixed, keep, new_nvars),
        )
    }

    /// `( num ) / ( den )`, or just the numerator when the denominator is one.
    pub fn render(&self, names: &[&str]) -> String {
        if self.den.is_one() {
            self.num.render(names)
        } else {
            format!("( {} ) / ( {} )", self.num.render(names), self.den.render(names))
        }
    }

    pub fn compile(&self) -> CompiledRational {
        CompiledRational {
            num: self.num.compile(),
            den: (!self.den.is_one()).then(|| self.den.compile()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompiledRational {
    num: CompiledPoly,
    den: Option<CompiledPoly>,
}

impl CompiledRational {
    pub fn eval(&self, point: &[f64]) -> f64 {
        let n = self.num.eval(point);
        match &self.den {
            Some(d) => n / d.eval(point),
            None => n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::param::{rat_to_f64, ratio};

    fn var(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, ParamId(i))
    }

    fn pregnancy() -> RationalFunction {
        let pq = (&var(2, 0) * &var(2, 1)).scale(&ratio(87, 100));
        let den = &pq + &Polynomial::constant(2, ratio(10378446, 100000000));
        RationalFunction::new(pq, den).unwrap()
    }

    #[test]
    fn unit_denominator() {
        let f = RationalFunction::from_poly(var(1, 0));
        assert_eq!(f.eval(&[ratio(1, 5)]).unwrap(), ratio(1, 5));
    }

    #[test]
    fn pregnancy_closed_form_values() {
        let f = pregnancy();
        let v = rat_to_f64(&f.eval(&[ratio(36, 100), ratio(27, 100)]).unwrap());
        assert!((v - 0.448976).abs() < 1e-6);
        let v = rat_to_f64(&f.eval(&[ratio(110456, 1000000), ratio(27, 100)]).unwrap());
        assert!((v - 0.2).abs() < 1e-5);
    }

    #[test]
    fn pole_is_reported() {
        let f = RationalFunction::new(Polynomial::one(1), var(1, 0)).unwrap();
        assert!(matches!(f.eval(&[ratio(0, 1)]), Err(Error::Pole)));
        assert!(matches!(
            RationalFunction::new(Polynomial::one(1), Polynomial::zero(1)),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn normalization_makes_denominator_monic() {
        let f = RationalFunction::new(var(1, 0), var(1, 0).scale(&ratio(-3, 1))).unwrap();
        assert_eq!(f.denominator().leading_coefficient(), Some(&ratio(1, 1)));
        assert!(f.equivalent(&RationalFunction::constant(1, ratio(-1, 3))));
        let g = RationalFunction::new(var(1, 0), Polynomial::constant(1, ratio(2, 1))).unwrap();
        assert!(g.is_polynomial());
        assert_eq!(g.numerator(), &var(1, 0).scale(&ratio(1, 2)));
    }

    #[test]
    fn arithmetic_and_equivalence() {
        let f = pregnancy();
        let g = f.complement();
        let s = f.try_add(&g).unwrap();
        assert!(s.equivalent(&RationalFunction::one(2)));
        let prod = f.try_mul(&f.recip().unwrap()).unwrap();
        assert!(prod.is_one());
    }

    #[test]
    fn quotient_rule_derivative() {
        let f = pregnancy();
        let d = f.diff(ParamId(0));
        let v = rat_to_f64(&d.eval(&[ratio(36, 100), ratio(27, 100)]).unwrap());
        assert!((v - 0.68722).abs() < 1e-4);
    }

    #[test]
    fn rendering() {
        let f = pregnancy();
        assert_eq!(
            f.render(&["p", "q"]),
            "( p*q ) / ( p*q + 1729741/14500000 )"
        );
    }
}
