//! Unary (thermometer-coded) stochastic and deterministic computing.

pub mod bench;
pub mod cli;
pub mod costmodel;
pub mod detmul;
pub mod error;
pub mod funcs;
pub mod matrix;
pub mod method;
pub mod streams;

pub use error::{Error, Result};
pub use method::{Method, Multiplier, ProductTable};
pub use streams::{BitStream, UnaryValue};
