pub mod characters;
pub mod cli;
pub mod cyclotomic;
pub mod entangle;
pub mod error;
pub mod finitefield;
pub mod galoisring;
pub mod json;
pub mod mub;
pub mod phase;
mod poly;
pub mod states;

pub use error::{Error, Result};
