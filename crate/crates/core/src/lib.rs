//! Certified inner approximations of solution sets of interval linear systems,
//! and the robot capability analyses built on them.

pub mod capability;
pub mod error;
pub mod geometry;
pub mod interval;
pub mod linprog;
pub mod parse;
pub mod robot;
pub mod solution_sets;

pub use error::{Error, Result};
pub use interval::{Interval, IntervalMatrix, IntervalVector};
