pub mod error;
pub mod cli;
pub mod closures;
pub mod compression;
pub mod grammars;
pub mod pipeline;
pub mod presentations;
pub mod rewriting;
pub mod symbol;

pub use error::{Error, Result};
pub use symbol::{Alphabet, Symbol, Word};
