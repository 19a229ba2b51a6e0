#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod degeneracy;
pub mod energies;
pub mod error;
pub mod euclid_embed;
pub mod menger;
pub mod normspace;
mod optimize;

pub use error::{Error, Result};
