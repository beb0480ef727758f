pub mod cache;
pub mod cli;
pub mod constructions;
pub mod diophantine;
pub mod error;
pub mod factorization;
pub mod group;
pub mod lattice;
pub mod refine;
pub mod subgroup;
pub mod zerosum;

pub use error::{Error, Result};
