//! A resource-aware type checker and interpreter for a small quantum
//! circuit-description language with parametric size bounds.

pub mod circuit;
pub mod index;
pub mod metrics;
pub mod racs;
pub mod syntax;
pub mod typeck;
pub mod prelude;
pub mod eval;
pub mod harness;
