//! Construction, solving and exhaustive search for Eulerian tuples of rational
//! squares: sets `{t1^2, ..., tm^2}` where `ti^2 tj^2 + ti^2 + tj^2` is a
//! rational square for every pair.

pub mod cli;
pub mod curve;
pub mod error;
pub mod family;
pub mod quartic;
pub mod rational;
pub mod search;
pub mod triple_eq;
pub mod tuple;

pub use curve::{Curve, Point};
pub use error::{Error, Result};
pub use rational::Rat;
pub use tuple::{pair_val, param_t, PairReport, SquareTuple, Status, Verdict};
