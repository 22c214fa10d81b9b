//! Inner approximations for the four quantifier classes.

mod omega;
mod problem;
mod sigma;

pub use omega::*;
pub use problem::*;
pub use sigma::*;
