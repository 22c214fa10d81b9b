//! Convex polytopes, zonotopes and inscribed shapes.

mod approx;
mod hpolytope;
mod hull;
mod zonotope;

pub use approx::{certified_radius, InnerApprox, Shape, ShapeRequest, SolutionClass, CERT_MARGIN};
pub use hpolytope::{HPolytope, DEDUP_TOL};
pub use hull::{minkowski_sum, vertex_hull, VPolytope};
pub use zonotope::{hyperplane_shift, Zonotope, MAX_VERTEX_GENERATORS};
pub(crate) use zonotope::{rank, Combinations};
