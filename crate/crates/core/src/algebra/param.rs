use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Exact rational from a small integer fraction.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational value of a finite float.
pub fn f64_to_rat(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

/// Renders `a/b`, or `a` when the denominator is one.
pub fn fmt_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Position of a parameter in its declaring [`ParameterSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    pub lower: Rational,
    pub upper: Rational,
}

impl Parameter {
    pub fn new(name: impl Into<String>, lower: Rational, upper: Rational) -> Result<Self> {
        let name = name.into();
        if lower >= upper {
            return Err(Error::InvalidParameter(format!(
                "`{name}`: lower bound {} is not below upper bound {}",
                fmt_rat(&lower),
                fmt_rat(&upper)
            )));
        }
        if lower.is_negative() || upper > Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "`{name}`: bounds must lie in [0, 1]"
            )));
        }
        Ok(Parameter { name, lower, upper })
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }
}

/// The canonical, declaration-ordered list of parameters of a model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParameterSet {
    params: Vec<Parameter>,
}

impl ParameterSet {
    pub fn new(params: Vec<Parameter>) -> Result<Self> {
        for (i, p) in params.iter().enumerate() {
            if params[..i].iter().any(|q| q.name == p.name) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate parameter `{}`",
                    p.name
                )));
            }
        }
        Ok(ParameterSet { params })
    }

    pub fn empty() -> Self {
        ParameterSet::default()
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn get(&self, id: ParamId) -> &Parameter {
        &self.params[id.0]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Parameter> {
        self.params.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.params.len()).map(ParamId)
    }

    pub fn find(&self, name: &str) -> Option<ParamId> {
        self.params.iter().position(|p| p.name == name).map(ParamId)
    }

    pub fn names(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.name.as_str()).collect()
    }
}

/// One value per parameter, within the declared bounds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instantiation {
    values: Vec<Rational>,
}

impl Instantiation {
    pub fn new(params: &ParameterSet, values: Vec<Rational>) -> Result<Self> {
        if values.len() != params.len() {
            return Err(Error::ParameterMismatch {
                left: params.len(),
                right: values.len(),
            });
        }
        for (p, v) in params.iter().zip(&values) {
            if v < &p.lower || v > &p.upper {
                return Err(Error::OutOfBounds {
                    name: p.name.clone(),
                    value: fmt_rat(v),
                    lower: fmt_rat(&p.lower),
                    upper: fmt_rat(&p.upper),
                });
            }
        }
        Ok(Instantiation { values })
    }

    /// Builds an instantiation from `name = value` pairs; every parameter must be named.
    pub fn from_pairs(params: &ParameterSet, pairs: &[(&str, Rational)]) -> Result<Self> {
        let mut values = vec![None; params.len()];
        for (name, v) in pairs {
            let id = params
                .find(name)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown parameter `{name}`")))?;
            values[id.0] = Some(v.clone());
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "no value for parameter `{}`",
                        params.get(ParamId(i)).name
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Instantiation::new(params, values)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, id: ParamId) -> &Rational {
        &self.values[id.0]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(rat_to_f64).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| rat_to_f64(v).to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}
