//! Exact BRST reduction for minimal W-(super)algebras of small rank.

#![allow(clippy::needless_range_loop)]

pub mod brst;
pub mod category_o;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod rational;
pub mod superalgebra;
pub mod suite;
pub mod walgebra;
pub mod weights;

pub use error::{MiniwError, Result};
pub use rational::Q;
