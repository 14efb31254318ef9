pub mod catalog;
pub mod cli;
pub mod error;
pub mod lazer_leach;
pub mod measures;
pub mod nonlinear;
pub mod problem;
pub mod resonance;
pub mod solver;
pub mod trigpoly;

pub use error::{Error, Result};
