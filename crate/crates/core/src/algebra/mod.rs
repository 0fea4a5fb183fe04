//! Exact polynomial and rational-function arithmetic over a declared
//! parameter set, plus parameter boxes.

mod param;
mod poly;
mod ratfunc;
mod region;

pub use param::{
    f64_to_rat, fmt_rat, rat_to_f64, ratio, Instantiation, ParamId, Parameter, ParameterSet,
    Rational,
};
pub use poly::{CompiledPoly, Monomial, Polynomial};
pub use ratfunc::{CompiledRational, RationalFunction};
pub use region::{Interval, Region, MAX_VERTEX_PARAMS};
