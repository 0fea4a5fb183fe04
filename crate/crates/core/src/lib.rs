pub mod algebra;
pub mod cli;
pub mod bn;
pub mod error;
pub mod io;
pub mod pla;
pub mod pmc;
pub mod synth;
pub mod transform;

pub use error::{Error, Result};
