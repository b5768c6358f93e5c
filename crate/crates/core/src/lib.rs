pub mod algebra;
pub mod dvariety;
pub mod error;
pub mod integrals;
pub mod numeric;
pub mod parser;

pub use error::{Error, Result};
