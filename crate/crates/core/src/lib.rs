//! RIS-assisted cascaded channel simulation: element and panel response,
//! stochastic sub-channels and their composition into a cascade CIR.

pub mod cascade;
pub mod cli;
pub mod config;
pub mod element;
pub mod error;
pub mod experiments;
pub mod gbsm;
pub mod geometry;
pub mod panel;

pub use error::{Error, Result};
