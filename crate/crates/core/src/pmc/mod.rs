//! Parametric and instantiated Markov chains, reachability, and the bridge
//! from network queries to reachability.

mod model;
mod query;
mod solve;

pub use model::{Mc, Pmc, PmcState, StatePredicate};
pub use query::{
    conditional_function, query_functions, query_prob, sensitivity_function, sensitivity_value,
    Mode,
};
pub(crate) use solve::{backward_reach, reverse_topological};
