pub mod cli;
pub mod cryptoherm;
pub mod error;
pub mod linalg;

pub use error::{Error, Result};
pub mod roots;
pub mod stargraph;
