//! Tate–Shafarevich groups of multinorm-one tori from abstract Galois data.

pub mod abelian_engine;
pub mod abgroup;
pub mod cli;
pub mod corpus;
pub mod cyclic_engine;
pub mod error;
pub mod oracle;
pub mod scenario;

pub use error::{Error, Result};
