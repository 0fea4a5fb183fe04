//! Text formats: the `.pbif` model language, constraint strings,
//! instantiation strings and the explicit pMC listing.

mod explicit;
mod expr;
mod lexer;
mod pbif;
mod query;

pub use explicit::{explicit_pmc_string, read_explicit_pmc, write_explicit_pmc};
pub use pbif::{default_bounds, parse_decimal, parse_pbif, render_pbif};
pub use query::{parse_instantiation, parse_number, parse_query};
