//! Parametric Bayesian networks: data model, validation, subclass profile,
//! instantiation and an exact enumeration oracle.

mod model;
mod oracle;
mod query;
mod subclass;
mod validate;

pub use model::{Cpt, Pbn, VarId, Variable};
pub use oracle::{Bn, MAX_JOINT_OUTCOMES};
pub use query::{Assignment, Comparison, Query, QueryKind, Side};
pub use subclass::SubclassTag;
pub use validate::{ValidationReport, Violation};
