//! Logarithmic discriminants of hyperplane arrangements.

pub mod arrangement;
pub mod cli;
pub mod critical;
pub mod discriminant;
pub mod error;
pub mod linalg;
pub mod moduli;
pub mod poly;
pub mod polytope;
pub mod rational;
pub mod reciprocal;
pub mod rng;

pub use error::{Error, Result};
pub use poly::Poly;
pub use rational::Rat;
