pub mod error;
pub mod model;

pub use error::{Error, Result};
pub mod cli;
pub mod feasibility;
pub mod io;
pub mod rectangles;
pub mod reduced;
pub mod witness;
